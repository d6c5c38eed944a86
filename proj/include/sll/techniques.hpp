#pragma once

#include <cstddef>
#include <vector>

#include "sll/core.hpp"
#include "sll/rng.hpp"

namespace sll {

/// How a threshold filter decides which low-confidence instances to drop.
struct ThresholdRule {
  enum class Mode { Percentile, Bound };

  Mode mode = Mode::Percentile;
  double value = 0.0;

  /// Drop the floor(fraction * n) least confident instances.
  static ThresholdRule percentile(double fraction);
  /// Drop instances whose plurality-class probability is below `bound`.
  static ThresholdRule bound(double bound);
};

/// Removes the least confident instances (lowest plurality-class
/// probability). Percentile mode drops exactly floor(value * n) instances,
/// breaking ties by original index; bound mode drops every instance whose
/// plurality probability is below the bound (which must exceed 1/k). The
/// survivors keep their original order. Throws DegenerateFilterError when
/// fewer than two instances or fewer than two distinct plurality classes
/// survive.
SoftDataset threshold_filter(const SoftDataset& data, const ThresholdRule& rule);

/// Result of plurality voting on one soft label.
struct PluralityVote {
  int cls = 0;
  double weight = 0.0;
};

/// The most probable class (ties to the lowest index) and its probability.
PluralityVote plurality_vote(const ClassDistribution& label);

/// `size` indices drawn uniformly with replacement from [0, n).
std::vector<std::size_t> bootstrap_sample(std::size_t n, std::size_t size, Rng& rng);

/// `size` indices drawn with replacement, each instance weighted by its
/// plurality-class probability. Throws AllZeroError when every weight is 0.
std::vector<std::size_t> max_sample(const SoftDataset& data, std::size_t size, Rng& rng);

/// Expands every instance into one weighted hard-labelled copy per class,
/// weight equal to that class's probability; zero-weight copies are dropped.
/// The total output weight equals the number of input instances.
WeightedHardDataset duplicate(const SoftDataset& data);

/// Draws a hard label from the soft label's distribution.
int label_sample(const ClassDistribution& label, Rng& rng);

/// Elementwise arithmetic mean of equal-shaped probability matrices.
Matrix average_probs(const std::vector<Matrix>& member_outputs);

}  // namespace sll
