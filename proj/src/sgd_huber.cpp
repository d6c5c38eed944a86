#include <algorithm>
#include <cmath>
#include <numeric>

#include "sll/classifiers.hpp"
#include "sll/errors.hpp"

namespace sll {

namespace {

constexpr double kAlpha = 1e-4;
constexpr std::size_t kMaxEpochs = 1000;
constexpr double kTolerance = 1e-3;
constexpr std::size_t kPatience = 5;
constexpr std::size_t kEarlyStoppingThreshold = 5000;
constexpr double kValidationFraction = 0.1;

// Modified Huber loss l(z) for margin z = y * f(x):
//   z >= 1: 0,   -1 <= z < 1: (1 - z)^2,   z < -1: -4z.
double modified_huber(double z) {
  if (z >= 1.0) return 0.0;
  if (z >= -1.0) {
    const double t = 1.0 - z;
    return t * t;
  }
  return -4.0 * z;
}

// d l / d f for margin z = y * f.
double modified_huber_dloss(double z, double y) {
  if (z >= 1.0) return 0.0;
  if (z >= -1.0) return -2.0 * y * (1.0 - z);
  return -4.0 * y;
}

// Inverse-scaling schedule: eta_t = 1 / (alpha * (t0 + t)). t0 makes the
// first step equal to typw / max(1, |dloss(-typw, 1)|) with typw the typical
// weight scale sqrt(1/sqrt(alpha)).
double initial_offset() {
  const double typw = std::sqrt(1.0 / std::sqrt(kAlpha));
  const double eta0 = typw / std::max(1.0, std::abs(modified_huber_dloss(-typw, 1.0)));
  return 1.0 / (eta0 * kAlpha);
}

bool weights_are_integers(const std::vector<double>& weights) {
  for (double w : weights) {
    if (std::abs(w - std::round(w)) > 1e-9) return false;
  }
  return true;
}

}  // namespace

std::unique_ptr<ProbabilisticClassifier> SGDHuber::clone_unfitted() const {
  return std::make_unique<SGDHuber>();
}

void SGDHuber::do_fit(const WeightedHardDataset& data, Rng& rng) {
  const std::size_t k = data.class_count;
  const std::size_t d = data.features.cols();

  // Integer weights are realized as repeated visits so that a weighted fit
  // runs the exact same update sequence as a fit on duplicated rows.
  std::vector<std::size_t> visit_rows;
  std::vector<double> visit_weights;
  if (weights_are_integers(data.weights)) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto copies = static_cast<std::size_t>(std::llround(data.weights[i]));
      for (std::size_t r = 0; r < copies; ++r) {
        visit_rows.push_back(i);
        visit_weights.push_back(1.0);
      }
    }
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.weights[i] == 0.0) continue;
      visit_rows.push_back(i);
      visit_weights.push_back(data.weights[i]);
    }
  }
  const std::size_t n = visit_rows.size();

  std::vector<double> class_weight(k, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    class_weight[static_cast<std::size_t>(data.labels[i])] += data.weights[i];
  }
  active_classes_.clear();
  for (std::size_t c = 0; c < k; ++c) {
    if (class_weight[c] > 0.0) active_classes_.push_back(c);
  }

  // Hold out a validation tail for early stopping on large sets.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t train_count = n;
  const bool early_stopping = n > kEarlyStoppingThreshold;
  if (early_stopping) {
    rng.shuffle(order);
    train_count = n - static_cast<std::size_t>(kValidationFraction * static_cast<double>(n));
  }

  coef_ = Matrix(k, d, 0.0);
  intercept_.assign(k, 0.0);
  const double t0 = initial_offset();

  // One-vs-rest: each active class trains an independent binary problem over
  // the same visit sequence (binary problems share the shuffled order within
  // an epoch, mirroring a joint pass over the data).
  const std::size_t binary_problems = active_classes_.size() == 2 ? 1 : active_classes_.size();
  std::vector<std::vector<double>> coefs(binary_problems, std::vector<double>(d, 0.0));
  std::vector<double> intercepts(binary_problems, 0.0);
  std::vector<double> best_metric(binary_problems,
                                  -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> stall(binary_problems, 0);
  std::vector<bool> done(binary_problems, false);
  std::vector<double> t_step(binary_problems, 0.0);

  std::vector<std::size_t> epoch_order(order);
  for (std::size_t epoch = 0; epoch < kMaxEpochs; ++epoch) {
    // Shuffle only the training slice; the validation tail stays fixed.
    for (std::size_t i = train_count; i-- > 1;) {
      const std::size_t j = rng.below(i + 1);
      std::swap(epoch_order[i], epoch_order[j]);
    }

    bool all_done = true;
    for (std::size_t b = 0; b < binary_problems; ++b) {
      if (done[b]) continue;
      all_done = false;
      const auto target = static_cast<int>(active_classes_[b]);
      auto& coef = coefs[b];
      double& intercept = intercepts[b];

      double sum_loss = 0.0;
      double sum_weight = 0.0;
      for (std::size_t p = 0; p < train_count; ++p) {
        const std::size_t v = epoch_order[p];
        const std::size_t i = visit_rows[v];
        const double w = visit_weights[v];
        auto row = data.features.row(i);
        const double y = data.labels[i] == target ? 1.0 : -1.0;
        double f = intercept;
        for (std::size_t j = 0; j < d; ++j) f += coef[j] * row[j];
        const double z = y * f;
        sum_loss += w * modified_huber(z);
        sum_weight += w;

        const double eta = 1.0 / (kAlpha * (t0 + t_step[b]));
        t_step[b] += 1.0;
        const double decay = 1.0 - eta * kAlpha;
        const double g = w * modified_huber_dloss(z, y);
        for (std::size_t j = 0; j < d; ++j) {
          coef[j] = coef[j] * decay - eta * g * row[j];
        }
        intercept -= eta * g;
      }

      double metric;
      if (early_stopping) {
        // Weighted accuracy on the held-out tail.
        double correct = 0.0;
        double total = 0.0;
        for (std::size_t p = train_count; p < n; ++p) {
          const std::size_t i = visit_rows[epoch_order[p]];
          const double w = visit_weights[epoch_order[p]];
          auto row = data.features.row(i);
          double f = intercept;
          for (std::size_t j = 0; j < d; ++j) f += coef[j] * row[j];
          const bool is_target = data.labels[i] == target;
          if ((f >= 0.0) == is_target) correct += w;
          total += w;
        }
        metric = total > 0.0 ? correct / total : 0.0;
      } else {
        metric = sum_weight > 0.0 ? -sum_loss / sum_weight : 0.0;
      }

      if (metric > best_metric[b] + kTolerance) {
        best_metric[b] = metric;
        stall[b] = 0;
      } else {
        best_metric[b] = std::max(best_metric[b], metric);
        if (++stall[b] >= kPatience) done[b] = true;
      }
    }
    if (all_done) break;
  }

  for (std::size_t b = 0; b < binary_problems; ++b) {
    const std::size_t c = active_classes_[b];
    for (std::size_t j = 0; j < d; ++j) {
      coef_(c, j) = coefs[b][j];
      if (!std::isfinite(coefs[b][j])) {
        throw NonFiniteError("SGD diverged to non-finite coefficients");
      }
    }
    intercept_[c] = intercepts[b];
  }
  if (active_classes_.size() == 2 && binary_problems == 1) {
    // The complementary class mirrors the single binary problem.
    const std::size_t other = active_classes_[1];
    for (std::size_t j = 0; j < d; ++j) coef_(other, j) = -coef_(active_classes_[0], j);
    intercept_[other] = -intercept_[active_classes_[0]];
  }
}

Matrix SGDHuber::do_predict_proba(const Matrix& features) const {
  const std::size_t d = features.cols();
  const std::size_t k = coef_.rows();
  Matrix out(features.rows(), k, 0.0);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto row = features.row(i);
    if (active_classes_.size() == 2) {
      const std::size_t pos = active_classes_[0];
      const std::size_t neg = active_classes_[1];
      double f = intercept_[pos];
      for (std::size_t j = 0; j < d; ++j) f += coef_(pos, j) * row[j];
      const double p = (std::clamp(f, -1.0, 1.0) + 1.0) / 2.0;
      out(i, pos) = p;
      out(i, neg) = 1.0 - p;
      continue;
    }
    double total = 0.0;
    for (std::size_t c : active_classes_) {
      double f = intercept_[c];
      for (std::size_t j = 0; j < d; ++j) f += coef_(c, j) * row[j];
      const double p = (std::clamp(f, -1.0, 1.0) + 1.0) / 2.0;
      out(i, c) = p;
      total += p;
    }
    if (total <= 0.0) {
      const double uniform = 1.0 / static_cast<double>(active_classes_.size());
      for (std::size_t c : active_classes_) out(i, c) = uniform;
    } else {
      for (std::size_t c : active_classes_) out(i, c) /= total;
    }
  }
  return out;
}

double SGDHuber::fitted_loss(const WeightedHardDataset& data) const {
  if (!is_fitted()) throw NotFittedError("SGDHuber was asked for its loss before fit");
  const std::size_t d = coef_.cols();
  double total_loss = 0.0;
  const double total_weight = data.total_weight();
  const std::size_t binary_problems = active_classes_.size() == 2 ? 1 : active_classes_.size();
  for (std::size_t b = 0; b < binary_problems; ++b) {
    const auto target = static_cast<int>(active_classes_[b]);
    const std::size_t c = active_classes_[b];
    double sum = 0.0;
    double reg = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      auto row = data.features.row(i);
      double f = intercept_[c];
      for (std::size_t j = 0; j < d; ++j) f += coef_(c, j) * row[j];
      const double y = data.labels[i] == target ? 1.0 : -1.0;
      sum += data.weights[i] * modified_huber(y * f);
    }
    for (std::size_t j = 0; j < d; ++j) reg += coef_(c, j) * coef_(c, j);
    total_loss += sum / total_weight + 0.5 * kAlpha * reg;
  }
  return total_loss;
}

}  // namespace sll
