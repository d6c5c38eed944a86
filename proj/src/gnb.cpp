#include <cmath>
#include <numbers>

#include "sll/classifiers.hpp"
#include "sll/errors.hpp"

namespace sll {

namespace {
constexpr double kVarianceSmoothing = 1e-9;
}

std::unique_ptr<ProbabilisticClassifier> GaussianNB::clone_unfitted() const {
  return std::make_unique<GaussianNB>();
}

void GaussianNB::do_fit(const WeightedHardDataset& data, Rng&) {
  const std::size_t k = data.class_count;
  const std::size_t d = data.features.cols();
  const std::size_t n = data.size();

  std::vector<double> class_weight(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    class_weight[static_cast<std::size_t>(data.labels[i])] += data.weights[i];
  }
  const double total_weight = data.total_weight();

  means_ = Matrix(k, d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = data.features.row(i);
    const auto c = static_cast<std::size_t>(data.labels[i]);
    for (std::size_t j = 0; j < d; ++j) {
      means_(c, j) += data.weights[i] * row[j];
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (class_weight[c] <= 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      means_(c, j) /= class_weight[c];
    }
  }

  variances_ = Matrix(k, d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = data.features.row(i);
    const auto c = static_cast<std::size_t>(data.labels[i]);
    for (std::size_t j = 0; j < d; ++j) {
      const double dev = row[j] - means_(c, j);
      variances_(c, j) += data.weights[i] * dev * dev;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (class_weight[c] <= 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      variances_(c, j) /= class_weight[c];
    }
  }

  // Floor all variances by a fraction of the largest weighted whole-set
  // feature variance; the floor must come from the weighted view so that a
  // weighted fit matches a fit on duplicated rows.
  std::vector<double> pooled_mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = data.features.row(i);
    for (std::size_t j = 0; j < d; ++j) pooled_mean[j] += data.weights[i] * row[j];
  }
  for (std::size_t j = 0; j < d; ++j) pooled_mean[j] /= total_weight;
  double max_pooled_variance = 0.0;
  std::vector<double> pooled_var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = data.features.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double dev = row[j] - pooled_mean[j];
      pooled_var[j] += data.weights[i] * dev * dev;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    max_pooled_variance = std::max(max_pooled_variance, pooled_var[j] / total_weight);
  }
  const double epsilon = kVarianceSmoothing * max_pooled_variance;

  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      variances_(c, j) += epsilon;
      if (class_weight[c] > 0.0 && variances_(c, j) <= 0.0) {
        throw DegenerateDataError("all training features are constant; the Gaussian model "
                                  "cannot assign likelihoods");
      }
    }
  }

  priors_.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) priors_[c] = class_weight[c] / total_weight;
}

Matrix GaussianNB::do_predict_proba(const Matrix& features) const {
  const std::size_t k = priors_.size();
  const std::size_t d = features.cols();
  Matrix out(features.rows(), k, 0.0);
  std::vector<double> log_posterior(k);
  constexpr double kLog2Pi = 1.8378770664093453;  // ln(2*pi)
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto row = features.row(i);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (priors_[c] <= 0.0) {
        log_posterior[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      double ll = std::log(priors_[c]);
      for (std::size_t j = 0; j < d; ++j) {
        const double var = variances_(c, j);
        const double dev = row[j] - means_(c, j);
        ll -= 0.5 * (kLog2Pi + std::log(var) + dev * dev / var);
      }
      log_posterior[c] = ll;
      best = std::max(best, ll);
    }
    double denom = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (log_posterior[c] == -std::numeric_limits<double>::infinity()) continue;
      denom += std::exp(log_posterior[c] - best);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (log_posterior[c] == -std::numeric_limits<double>::infinity()) continue;
      out(i, c) = std::exp(log_posterior[c] - best) / denom;
    }
  }
  return out;
}

}  // namespace sll
