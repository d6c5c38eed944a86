#include "sll/simulate.hpp"

#include <cmath>

#include "sll/errors.hpp"
#include "sll/parallel.hpp"

namespace sll {

namespace {
constexpr std::size_t kMaxRejectionAttempts = 1000000;
}

void GaussianSimConfig::validate() const {
  if (dims < 1) throw OutOfRangeError("simulation needs at least one dimension");
  if (!(prior1 > 0.0 && prior1 <= 0.5)) {
    throw OutOfRangeError("class-1 prior must lie in (0, 0.5], got " + std::to_string(prior1));
  }
  if (noise_sigma < 0.0) throw OutOfRangeError("noise sigma must be non-negative");
  if (repeats < 1) throw OutOfRangeError("repeats must be at least 1");
  if (sample_sizes.empty()) throw OutOfRangeError("no sample sizes requested");
  for (std::size_t n : sample_sizes) {
    if (n < 4) {
      throw OutOfRangeError("sample sizes must be at least 4 (two per class), got " +
                            std::to_string(n));
    }
  }
}

std::pair<Matrix, std::vector<int>> sample_gaussian_mixture(const GaussianSimConfig& cfg,
                                                            std::size_t n_samples, Rng& rng) {
  if (n_samples < 4) {
    throw OutOfRangeError("batch size must be at least 4 to hold two samples per class");
  }
  Matrix points(n_samples, cfg.dims, 0.0);
  std::vector<int> classes(n_samples);
  for (std::size_t attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    std::size_t count1 = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const bool class1 = rng.uniform() < cfg.prior1;
      classes[i] = class1 ? 0 : 1;
      count1 += class1 ? 1 : 0;
      const double mean = class1 ? cfg.d : -cfg.d;
      for (std::size_t j = 0; j < cfg.dims; ++j) {
        points(i, j) = rng.normal(mean, 1.0);
      }
    }
    if (count1 >= 2 && n_samples - count1 >= 2) {
      return {std::move(points), std::move(classes)};
    }
  }
  throw DegenerateDataError("could not draw a batch with two samples per class within the "
                            "attempt budget");
}

ClassDistribution true_posterior(std::span<const double> x, const GaussianSimConfig& cfg) {
  if (x.size() != cfg.dims) {
    throw DimensionMismatchError("point dimensionality does not match the configuration");
  }
  double coordinate_sum = 0.0;
  for (double v : x) coordinate_sum += v;
  const double log_odds =
      std::log(cfg.prior1 / (1.0 - cfg.prior1)) + 2.0 * cfg.d * coordinate_sum;
  const double p1 = 1.0 / (1.0 + std::exp(-log_odds));
  return ClassDistribution({p1, 1.0 - p1});
}

ClassDistribution add_soft_noise(const ClassDistribution& label, double sigma, Rng& rng) {
  if (label.size() != 2) {
    throw DimensionMismatchError("soft label noise is defined for binary labels");
  }
  if (sigma == 0.0) return label;
  // Truncated Gaussian: draws that would push the class-1 probability outside
  // [0, 1] are rejected and redrawn. Clipping to the endpoints instead would
  // pile probability mass onto 0 for near-certain labels and starve the
  // weighted mean estimator of minority-class weight at small sample sizes.
  for (std::size_t attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    const double p1 = label[0] + rng.normal(0.0, sigma);
    if (p1 >= 0.0 && p1 <= 1.0) return ClassDistribution({p1, 1.0 - p1});
  }
  throw DegenerateDataError("could not draw an in-range noise value within the attempt budget");
}

std::pair<std::vector<double>, std::vector<double>> estimate_means_soft(
    const Matrix& points, const std::vector<ClassDistribution>& labels) {
  if (points.rows() != labels.size()) {
    throw ShapeMismatchError("points and labels disagree on sample count");
  }
  const std::size_t dims = points.cols();
  std::vector<double> mean1(dims, 0.0);
  std::vector<double> mean2(dims, 0.0);
  double weight1 = 0.0;
  double weight2 = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto row = points.row(i);
    const double p1 = labels[i][0];
    const double p2 = labels[i][1];
    weight1 += p1;
    weight2 += p2;
    for (std::size_t j = 0; j < dims; ++j) {
      mean1[j] += p1 * row[j];
      mean2[j] += p2 * row[j];
    }
  }
  if (weight1 <= 0.0 || weight2 <= 0.0) {
    throw ZeroWeightError("a class has zero total soft weight");
  }
  for (std::size_t j = 0; j < dims; ++j) {
    mean1[j] /= weight1;
    mean2[j] /= weight2;
  }
  return {std::move(mean1), std::move(mean2)};
}

std::pair<std::vector<double>, std::vector<double>> estimate_means_hard(
    const Matrix& points, const std::vector<int>& labels) {
  if (points.rows() != labels.size()) {
    throw ShapeMismatchError("points and labels disagree on sample count");
  }
  const std::size_t dims = points.cols();
  std::vector<double> mean1(dims, 0.0);
  std::vector<double> mean2(dims, 0.0);
  std::size_t count1 = 0;
  std::size_t count2 = 0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto row = points.row(i);
    if (labels[i] == 0) {
      ++count1;
      for (std::size_t j = 0; j < dims; ++j) mean1[j] += row[j];
    } else {
      ++count2;
      for (std::size_t j = 0; j < dims; ++j) mean2[j] += row[j];
    }
  }
  if (count1 == 0 || count2 == 0) {
    throw ZeroWeightError("a class has no assigned samples");
  }
  for (std::size_t j = 0; j < dims; ++j) {
    mean1[j] /= static_cast<double>(count1);
    mean2[j] /= static_cast<double>(count2);
  }
  return {std::move(mean1), std::move(mean2)};
}

namespace {

double mse_against_mean1(const std::vector<double>& estimate, const GaussianSimConfig& cfg) {
  double sum = 0.0;
  for (double v : estimate) {
    const double err = v - cfg.d;
    sum += err * err;
  }
  return sum / static_cast<double>(estimate.size());
}

}  // namespace

std::vector<DeltaMsePoint> run_delta_mse(const GaussianSimConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::vector<DeltaMsePoint> curve;
  curve.reserve(cfg.sample_sizes.size());

  for (std::size_t s = 0; s < cfg.sample_sizes.size(); ++s) {
    const std::size_t n = cfg.sample_sizes[s];
    std::vector<double> diffs(cfg.repeats, 0.0);
    parallel_for(cfg.repeats, [&](std::size_t r) {
      Rng rng(derive_seed(seed, {s, r}));
      auto [points, classes] = sample_gaussian_mixture(cfg, n, rng);
      std::vector<ClassDistribution> soft;
      soft.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        ClassDistribution posterior = true_posterior(points.row(i), cfg);
        soft.push_back(cfg.noise_sigma > 0.0
                           ? add_soft_noise(posterior, cfg.noise_sigma, rng)
                           : std::move(posterior));
      }
      const auto soft_est = estimate_means_soft(points, soft);
      const auto hard_est = estimate_means_hard(points, classes);
      diffs[r] =
          mse_against_mean1(soft_est.first, cfg) - mse_against_mean1(hard_est.first, cfg);
    });

    double mean = 0.0;
    for (double v : diffs) mean += v;
    mean /= static_cast<double>(cfg.repeats);
    double var = 0.0;
    for (double v : diffs) {
      const double dev = v - mean;
      var += dev * dev;
    }
    var /= static_cast<double>(cfg.repeats > 1 ? cfg.repeats - 1 : 1);
    const double se = std::sqrt(var / static_cast<double>(cfg.repeats));
    curve.push_back({n, mean, se, cfg.repeats});
  }
  return curve;
}

}  // namespace sll
