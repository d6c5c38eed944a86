#include "sll/techniques.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sll/errors.hpp"

namespace sll {

ThresholdRule ThresholdRule::percentile(double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw OutOfRangeError("threshold percentile must lie in [0, 1), got " +
                          std::to_string(fraction));
  }
  return {Mode::Percentile, fraction};
}

ThresholdRule ThresholdRule::bound(double bound) {
  if (!(bound > 0.0 && bound <= 1.0)) {
    throw OutOfRangeError("threshold bound must lie in (0, 1], got " + std::to_string(bound));
  }
  return {Mode::Bound, bound};
}

SoftDataset threshold_filter(const SoftDataset& data, const ThresholdRule& rule) {
  const std::size_t n = data.size();
  std::vector<bool> keep(n, true);

  if (rule.mode == ThresholdRule::Mode::Percentile) {
    const auto drop_count = static_cast<std::size_t>(
        std::floor(rule.value * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return data.labels[a].max_prob() < data.labels[b].max_prob();
    });
    for (std::size_t p = 0; p < drop_count; ++p) keep[order[p]] = false;
  } else {
    // A plurality probability is never below 1/k, so bound = 1/k keeps
    // everything (the identity filter) and anything smaller is a mistake.
    const double k_inverse = 1.0 / static_cast<double>(data.class_count);
    if (rule.value < k_inverse) {
      throw OutOfRangeError("threshold bound must be at least 1/k = " +
                            std::to_string(k_inverse));
    }
    for (std::size_t i = 0; i < n; ++i) {
      keep[i] = data.labels[i].max_prob() >= rule.value;
    }
  }

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) kept.push_back(i);
  }
  if (kept.size() < 2) {
    throw DegenerateFilterError("threshold filter keeps " + std::to_string(kept.size()) +
                                " instances; at least 2 required");
  }
  std::set<std::size_t> plurality_classes;
  for (std::size_t i : kept) plurality_classes.insert(data.labels[i].argmax());
  if (plurality_classes.size() < 2) {
    throw DegenerateFilterError("threshold filter leaves a single plurality class");
  }

  std::vector<ClassDistribution> labels;
  labels.reserve(kept.size());
  for (std::size_t i : kept) labels.push_back(data.labels[i]);
  return SoftDataset(data.features.select_rows(kept), std::move(labels));
}

PluralityVote plurality_vote(const ClassDistribution& label) {
  const std::size_t cls = label.argmax();
  return {static_cast<int>(cls), label[cls]};
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, std::size_t size, Rng& rng) {
  if (n == 0) {
    throw DegenerateDataError("cannot bootstrap an empty dataset");
  }
  std::vector<std::size_t> indices(size);
  for (std::size_t i = 0; i < size; ++i) indices[i] = rng.below(n);
  return indices;
}

std::vector<std::size_t> max_sample(const SoftDataset& data, std::size_t size, Rng& rng) {
  std::vector<double> weights(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) weights[i] = data.labels[i].max_prob();
  WeightedSampler sampler(weights);
  std::vector<std::size_t> indices(size);
  for (std::size_t i = 0; i < size; ++i) indices[i] = sampler.draw(rng);
  return indices;
}

WeightedHardDataset duplicate(const SoftDataset& data) {
  const std::size_t k = data.class_count;
  std::vector<std::size_t> source_rows;
  std::vector<int> labels;
  std::vector<double> weights;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      const double p = data.labels[i][c];
      if (p == 0.0) continue;
      source_rows.push_back(i);
      labels.push_back(static_cast<int>(c));
      weights.push_back(p);
    }
  }
  return WeightedHardDataset(data.features.select_rows(source_rows), std::move(labels),
                             std::move(weights), k);
}

int label_sample(const ClassDistribution& label, Rng& rng) {
  WeightedSampler sampler(label.probs());
  return static_cast<int>(sampler.draw(rng));
}

Matrix average_probs(const std::vector<Matrix>& member_outputs) {
  if (member_outputs.empty()) {
    throw DegenerateDataError("cannot average zero prediction matrices");
  }
  const Matrix& first = member_outputs.front();
  Matrix out(first.rows(), first.cols(), 0.0);
  for (const Matrix& m : member_outputs) {
    if (m.rows() != first.rows() || m.cols() != first.cols()) {
      throw ShapeMismatchError("member prediction matrices disagree on shape");
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) += m(i, j);
    }
  }
  const double inv = 1.0 / static_cast<double>(member_outputs.size());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= inv;
  }
  return out;
}

}  // namespace sll
