#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sll/core.hpp"
#include "sll/matrix.hpp"
#include "sll/rng.hpp"

namespace sll {

/// Two-Gaussian mean-estimation study: points drawn from MVN((d,...,d), I)
/// with probability prior1 and MVN((-d,...,-d), I) otherwise, soft labels
/// from the exact posterior, hard labels from the true sampled class.
struct GaussianSimConfig {
  double d = 0.5;
  std::size_t dims = 2;
  double prior1 = 0.5;
  std::vector<std::size_t> sample_sizes;
  std::size_t repeats = 10000;
  double noise_sigma = 0.0;

  void validate() const;
};

/// One point of the soft-minus-hard mean-squared-error curve.
struct DeltaMsePoint {
  std::size_t sample_size = 0;
  double delta_mse = 0.0;
  double stderr_value = 0.0;
  std::size_t repeats = 0;
};

/// Draws a batch of `n_samples` labelled points, re-drawing the whole batch
/// until both classes have at least two members (bounded rejection).
std::pair<Matrix, std::vector<int>> sample_gaussian_mixture(const GaussianSimConfig& cfg,
                                                            std::size_t n_samples, Rng& rng);

/// Exact class posterior [p_C1, 1 - p_C1] at x: identity covariances make
/// the log-odds affine, ln(prior1/prior2) + 2 d * sum_j x_j.
ClassDistribution true_posterior(std::span<const double> x, const GaussianSimConfig& cfg);

/// Perturbs a binary soft label: adds e ~ Normal(0, sigma) to the class-1
/// probability, clamps it to [0, 1] and gives the complement to class 2.
ClassDistribution add_soft_noise(const ClassDistribution& label, double sigma, Rng& rng);

/// Probability-weighted per-class means (soft estimator).
std::pair<std::vector<double>, std::vector<double>> estimate_means_soft(
    const Matrix& points, const std::vector<ClassDistribution>& labels);

/// Arithmetic per-class means over assigned points (hard estimator).
std::pair<std::vector<double>, std::vector<double>> estimate_means_hard(
    const Matrix& points, const std::vector<int>& labels);

/// For each sample size: repeats times, draw a batch, estimate the class-1
/// mean with soft and hard labels, and average the paired difference of
/// squared errors against the true mean. stderr_value is the standard error
/// of that paired difference. Repeats run in parallel on derived substreams;
/// results are independent of the thread count.
std::vector<DeltaMsePoint> run_delta_mse(const GaussianSimConfig& cfg, std::uint64_t seed);

}  // namespace sll
