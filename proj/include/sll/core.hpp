#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "sll/errors.hpp"
#include "sll/matrix.hpp"
#include "sll/rng.hpp"

namespace sll {

/// Sum-to-one tolerance enforced after construction or normalization.
inline constexpr double kProbSumTolerance = 1e-9;
/// Inputs off by at most this much are silently renormalized; anything worse
/// is rejected as invalid.
inline constexpr double kProbRepairTolerance = 1e-6;

/// A soft label: discrete probability distribution over k >= 2 classes.
/// Immutable after construction; entries lie in [0, 1] and sum to one within
/// kProbSumTolerance.
class ClassDistribution {
 public:
  explicit ClassDistribution(std::vector<double> probs);

  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t c) const { return probs_[c]; }

  /// Index of the most probable class; ties resolve to the lowest index.
  std::size_t argmax() const;
  double max_prob() const { return probs_[argmax()]; }

  bool operator==(const ClassDistribution& other) const = default;

 private:
  std::vector<double> probs_;
};

/// Feature matrix paired with one soft label per row.
struct SoftDataset {
  Matrix features;
  std::vector<ClassDistribution> labels;
  std::size_t class_count = 0;

  SoftDataset() = default;
  SoftDataset(Matrix features, std::vector<ClassDistribution> labels);

  std::size_t size() const { return labels.size(); }
};

/// Feature matrix paired with integer class labels in [0, class_count).
struct HardDataset {
  Matrix features;
  std::vector<int> labels;
  std::size_t class_count = 0;

  HardDataset() = default;
  HardDataset(Matrix features, std::vector<int> labels, std::size_t class_count);

  std::size_t size() const { return labels.size(); }
};

/// Hard labels with per-example non-negative weights; the training input of
/// every base classifier.
struct WeightedHardDataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<double> weights;
  std::size_t class_count = 0;

  WeightedHardDataset() = default;
  WeightedHardDataset(Matrix features, std::vector<int> labels, std::vector<double> weights,
                      std::size_t class_count);

  static WeightedHardDataset unit_weights(HardDataset data);

  std::size_t size() const { return labels.size(); }
  double total_weight() const;
};

/// Contract satisfied by every base learner and composed method: a weighted
/// fit followed by per-class probability prediction. Fitting with all weights
/// equal to one is identical to an unweighted fit. Fitted instances are
/// immutable and safe to share across threads.
class ProbabilisticClassifier {
 public:
  virtual ~ProbabilisticClassifier() = default;

  void fit(const WeightedHardDataset& data, std::uint64_t seed);
  Matrix predict_proba(const Matrix& features) const;

  bool is_fitted() const { return fitted_; }
  std::size_t class_count() const { return class_count_; }
  std::size_t feature_count() const { return feature_count_; }

  virtual std::string_view name() const = 0;
  virtual std::unique_ptr<ProbabilisticClassifier> clone_unfitted() const = 0;

 protected:
  virtual void do_fit(const WeightedHardDataset& data, Rng& rng) = 0;
  virtual Matrix do_predict_proba(const Matrix& features) const = 0;

 private:
  bool fitted_ = false;
  std::size_t class_count_ = 0;
  std::size_t feature_count_ = 0;
};

/// Truncates entries to [0, 1] and rescales to sum one, preserving
/// proportionality of the truncated input. Throws AllZeroError when nothing
/// survives truncation.
ClassDistribution normalize(std::vector<double> raw);

/// Distribution with all mass on `label`.
ClassDistribution one_hot(int label, std::size_t k);

/// Converts an expert confidence score c in 5..10 for a binary hard label
/// into a soft label placing mass c/10 on the asserted class.
ClassDistribution confidence_to_soft(int label, int confidence);

}  // namespace sll
