#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sll/core.hpp"

namespace sll {

/// Gaussian naive Bayes with weighted maximum-likelihood estimates.
/// Classes whose total weight is zero receive zero prior and zero predicted
/// probability. Variances are floored by 1e-9 times the largest weighted
/// per-feature variance of the whole training set, so constant features do
/// not produce singular likelihoods.
class GaussianNB final : public ProbabilisticClassifier {
 public:
  std::string_view name() const override { return "GNB"; }
  std::unique_ptr<ProbabilisticClassifier> clone_unfitted() const override;

  const std::vector<double>& priors() const { return priors_; }
  const Matrix& means() const { return means_; }
  const Matrix& variances() const { return variances_; }

 protected:
  void do_fit(const WeightedHardDataset& data, Rng& rng) override;
  Matrix do_predict_proba(const Matrix& features) const override;

 private:
  std::vector<double> priors_;
  Matrix means_;
  Matrix variances_;
};

/// Multinomial logistic regression minimizing
///   J(theta) = 0.5 * ||coef||^2 + C * sum_i w_i * nll_i,   C = 1,
/// by full-batch gradient descent with a backtracking (Armijo) line search.
/// The intercept is not penalized. Because the data term is a weighted sum,
/// an integer weight w is interchangeable with w physical copies of the row.
/// Classes with zero total weight are excluded from the fit and predicted
/// with probability zero.
class LogisticRegression final : public ProbabilisticClassifier {
 public:
  std::string_view name() const override { return "LR"; }
  std::unique_ptr<ProbabilisticClassifier> clone_unfitted() const override;

  const Matrix& coefficients() const { return coef_; }
  const std::vector<double>& intercepts() const { return intercept_; }

  /// Parameter layout for the static objective/gradient helpers:
  /// coefficient matrix (class-major, k*d entries) followed by k intercepts.
  static std::size_t parameter_count(std::size_t k, std::size_t d) { return k * d + k; }

  /// Objective value at `params` over all data.class_count classes.
  /// `reg_scale` multiplies only the regularization term; scaling all weights
  /// and reg_scale by the same positive constant scales the objective by that
  /// constant and therefore leaves the minimizer unchanged.
  static double objective(const WeightedHardDataset& data, std::span<const double> params,
                          double reg_scale = 1.0);

  /// Analytic gradient of `objective` in the same layout as `params`.
  static std::vector<double> gradient(const WeightedHardDataset& data,
                                      std::span<const double> params, double reg_scale = 1.0);

  /// Training objective of the fitted model on `data`, with absent classes
  /// pinned at zero. Used to verify weight/duplication equivalence.
  double fitted_objective(const WeightedHardDataset& data) const;

 protected:
  void do_fit(const WeightedHardDataset& data, Rng& rng) override;
  Matrix do_predict_proba(const Matrix& features) const override;

 private:
  Matrix coef_;
  std::vector<double> intercept_;
  std::vector<std::size_t> active_classes_;
};

/// Linear one-vs-rest classifier trained by stochastic gradient descent on
/// the modified Huber loss (quadratically smoothed hinge) with L2 penalty
/// alpha = 1e-4 and the inverse-scaling learning rate eta_t = 1/(alpha(t0+t)).
/// Integer example weights are handled by visiting a row that many times per
/// epoch, which makes a weighted fit and a fit on physically duplicated rows
/// the same computation; fractional weights scale the per-visit gradient.
/// When the (expanded) training set exceeds 5000 rows, training holds out 10%
/// for early stopping with patience 5.
class SGDHuber final : public ProbabilisticClassifier {
 public:
  std::string_view name() const override { return "SGDHuber"; }
  std::unique_ptr<ProbabilisticClassifier> clone_unfitted() const override;

  const Matrix& coefficients() const { return coef_; }
  const std::vector<double>& intercepts() const { return intercept_; }

  /// Mean modified-Huber loss of the fitted model over the expansion of
  /// `data` (each row counted with its weight) plus the L2 term, summed over
  /// the one-vs-rest problems. Used to verify weight/duplication equivalence.
  double fitted_loss(const WeightedHardDataset& data) const;

 protected:
  void do_fit(const WeightedHardDataset& data, Rng& rng) override;
  Matrix do_predict_proba(const Matrix& features) const override;

 private:
  Matrix coef_;
  std::vector<double> intercept_;
  std::vector<std::size_t> active_classes_;
};

/// Binary decision tree minimizing weighted Gini impurity. Each node draws a
/// random subset of ceil(sqrt(d)) candidate features; thresholds are
/// midpoints between consecutive distinct values. Equal-quality splits
/// resolve to the lowest feature index, then the lowest threshold. Nodes
/// split until pure or until no candidate split reduces impurity. Leaves
/// store weighted class counts and predict their normalized frequencies.
class DecisionTree final : public ProbabilisticClassifier {
 public:
  std::string_view name() const override { return "DT"; }
  std::unique_ptr<ProbabilisticClassifier> clone_unfitted() const override;

  /// Deterministic serialization of the tree shape, split parameters and
  /// leaf counts; two trees compare equal iff their strings match.
  std::string structure_string() const;

 protected:
  void do_fit(const WeightedHardDataset& data, Rng& rng) override;
  Matrix do_predict_proba(const Matrix& features) const override;

 private:
  struct Node {
    // Leaf when feature == -1; children index into the node pool.
    int feature = -1;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<double> class_weights;
  };

  std::size_t build_node(const Matrix& x, const std::vector<int>& y,
                         const std::vector<double>& w, std::vector<std::size_t>& rows,
                         std::size_t begin, std::size_t end, std::size_t k, Rng& rng);

  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

/// Builds an unfitted base classifier from its registry name
/// (GNB, LR, SGDHuber, DT). Throws SchemaError for unknown names.
std::unique_ptr<ProbabilisticClassifier> make_base_classifier(std::string_view name);

/// Registry order of the base classifier names.
const std::vector<std::string>& base_classifier_names();

}  // namespace sll
