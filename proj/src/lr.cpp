#include <algorithm>
#include <cmath>
#include <limits>

#include "sll/classifiers.hpp"
#include "sll/errors.hpp"

namespace sll {

namespace {

constexpr double kGradientTolerance = 1e-6;
constexpr std::size_t kMaxIterations = 1000;
constexpr double kArmijoSlope = 1e-4;

// Writes softmax(logits) into probs using the max-shift for stability.
void softmax(std::span<const double> logits, std::span<double> probs) {
  double best = -std::numeric_limits<double>::infinity();
  for (double v : logits) best = std::max(best, v);
  double denom = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    probs[c] = std::exp(logits[c] - best);
    denom += probs[c];
  }
  for (std::size_t c = 0; c < logits.size(); ++c) probs[c] /= denom;
}

void compute_logits(const WeightedHardDataset& data, std::span<const double> params,
                    std::size_t i, std::span<double> logits) {
  const std::size_t k = data.class_count;
  const std::size_t d = data.features.cols();
  auto row = data.features.row(i);
  for (std::size_t c = 0; c < k; ++c) {
    double z = params[k * d + c];
    const double* coef = params.data() + c * d;
    for (std::size_t j = 0; j < d; ++j) z += coef[j] * row[j];
    logits[c] = z;
  }
}

}  // namespace

std::unique_ptr<ProbabilisticClassifier> LogisticRegression::clone_unfitted() const {
  return std::make_unique<LogisticRegression>();
}

double LogisticRegression::objective(const WeightedHardDataset& data,
                                     std::span<const double> params, double reg_scale) {
  const std::size_t k = data.class_count;
  const std::size_t d = data.features.cols();
  if (params.size() != parameter_count(k, d)) {
    throw ShapeMismatchError("parameter vector has wrong length");
  }
  double penalty = 0.0;
  for (std::size_t t = 0; t < k * d; ++t) penalty += params[t] * params[t];
  double value = reg_scale * 0.5 * penalty;

  std::vector<double> logits(k);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.weights[i] == 0.0) continue;
    compute_logits(data, params, i, logits);
    double best = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (double z : logits) denom += std::exp(z - best);
    const auto y = static_cast<std::size_t>(data.labels[i]);
    const double nll = std::log(denom) - (logits[y] - best);
    value += data.weights[i] * nll;
  }
  return value;
}

std::vector<double> LogisticRegression::gradient(const WeightedHardDataset& data,
                                                 std::span<const double> params,
                                                 double reg_scale) {
  const std::size_t k = data.class_count;
  const std::size_t d = data.features.cols();
  if (params.size() != parameter_count(k, d)) {
    throw ShapeMismatchError("parameter vector has wrong length");
  }
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t t = 0; t < k * d; ++t) grad[t] = reg_scale * params[t];

  std::vector<double> logits(k);
  std::vector<double> probs(k);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.weights[i] == 0.0) continue;
    compute_logits(data, params, i, logits);
    softmax(logits, probs);
    auto row = data.features.row(i);
    const auto y = static_cast<std::size_t>(data.labels[i]);
    for (std::size_t c = 0; c < k; ++c) {
      const double residual = data.weights[i] * (probs[c] - (c == y ? 1.0 : 0.0));
      double* gc = grad.data() + c * d;
      for (std::size_t j = 0; j < d; ++j) gc[j] += residual * row[j];
      grad[k * d + c] += residual;
    }
  }
  return grad;
}

void LogisticRegression::do_fit(const WeightedHardDataset& data, Rng&) {
  const std::size_t k = data.class_count;
  const std::size_t d = data.features.cols();

  // Restrict the optimization to classes that carry weight; the rest keep
  // zero probability at prediction time.
  std::vector<double> class_weight(k, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    class_weight[static_cast<std::size_t>(data.labels[i])] += data.weights[i];
  }
  active_classes_.clear();
  std::vector<int> compact(k, -1);
  for (std::size_t c = 0; c < k; ++c) {
    if (class_weight[c] > 0.0) {
      compact[c] = static_cast<int>(active_classes_.size());
      active_classes_.push_back(c);
    }
  }
  const std::size_t ka = active_classes_.size();

  std::vector<int> labels(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    labels[i] = compact[static_cast<std::size_t>(data.labels[i])];
    if (labels[i] < 0) labels[i] = 0;  // zero-weight row; value is irrelevant
  }
  WeightedHardDataset reduced(data.features, std::move(labels), data.weights, ka);

  std::vector<double> params(parameter_count(ka, d), 0.0);
  double value = objective(reduced, params);
  double step = 1.0;
  for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
    std::vector<double> grad = gradient(reduced, params);
    double grad_inf = 0.0;
    double grad_sq = 0.0;
    for (double g : grad) {
      grad_inf = std::max(grad_inf, std::abs(g));
      grad_sq += g * g;
    }
    if (grad_inf < kGradientTolerance) break;

    // Backtracking line search along the steepest descent direction.
    step = std::min(step * 2.0, 1e6);
    std::vector<double> trial(params.size());
    double trial_value = 0.0;
    while (true) {
      for (std::size_t t = 0; t < params.size(); ++t) trial[t] = params[t] - step * grad[t];
      trial_value = objective(reduced, trial);
      if (trial_value <= value - kArmijoSlope * step * grad_sq) break;
      step *= 0.5;
      if (step < 1e-18) {
        throw NonFiniteError("line search stalled; the optimization cannot make progress");
      }
    }
    params.swap(trial);
    value = trial_value;
    if (!std::isfinite(value)) {
      throw NonFiniteError("objective diverged during optimization");
    }
  }

  coef_ = Matrix(k, d, 0.0);
  intercept_.assign(k, 0.0);
  for (std::size_t a = 0; a < ka; ++a) {
    const std::size_t c = active_classes_[a];
    for (std::size_t j = 0; j < d; ++j) coef_(c, j) = params[a * d + j];
    intercept_[c] = params[ka * d + a];
  }
}

Matrix LogisticRegression::do_predict_proba(const Matrix& features) const {
  const std::size_t ka = active_classes_.size();
  const std::size_t d = features.cols();
  Matrix out(features.rows(), coef_.rows(), 0.0);
  std::vector<double> logits(ka);
  std::vector<double> probs(ka);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto row = features.row(i);
    for (std::size_t a = 0; a < ka; ++a) {
      const std::size_t c = active_classes_[a];
      double z = intercept_[c];
      for (std::size_t j = 0; j < d; ++j) z += coef_(c, j) * row[j];
      logits[a] = z;
    }
    softmax(logits, probs);
    for (std::size_t a = 0; a < ka; ++a) out(i, active_classes_[a]) = probs[a];
  }
  return out;
}

double LogisticRegression::fitted_objective(const WeightedHardDataset& data) const {
  if (!is_fitted()) throw NotFittedError("LR was asked for its objective before fit");
  const std::size_t ka = active_classes_.size();
  const std::size_t d = coef_.cols();
  std::vector<int> compact(coef_.rows(), -1);
  for (std::size_t a = 0; a < ka; ++a) compact[active_classes_[a]] = static_cast<int>(a);
  std::vector<int> labels(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    labels[i] = compact[static_cast<std::size_t>(data.labels[i])];
    if (labels[i] < 0) {
      throw OutOfRangeError("objective evaluation saw a class absent from the fit");
    }
  }
  WeightedHardDataset reduced(data.features, std::move(labels), data.weights, ka);
  std::vector<double> params(parameter_count(ka, d), 0.0);
  for (std::size_t a = 0; a < ka; ++a) {
    const std::size_t c = active_classes_[a];
    for (std::size_t j = 0; j < d; ++j) params[a * d + j] = coef_(c, j);
    params[ka * d + a] = intercept_[c];
  }
  return objective(reduced, params);
}

}  // namespace sll
