#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sll/core.hpp"
#include "sll/matrix.hpp"
#include "sll/rng.hpp"

namespace test {

/// A random distribution over k classes with strictly positive entries.
inline sll::ClassDistribution random_distribution(sll::Rng& rng, std::size_t k) {
  std::vector<double> raw(k);
  double total = 0.0;
  for (double& v : raw) {
    v = rng.uniform() + 1e-6;
    total += v;
  }
  for (double& v : raw) v /= total;
  return sll::ClassDistribution(sll::normalize(raw).probs());
}

inline sll::SoftDataset random_soft_dataset(sll::Rng& rng, std::size_t n, std::size_t k,
                                            std::size_t d) {
  sll::Matrix features(n, d);
  std::vector<sll::ClassDistribution> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) features(i, j) = rng.normal();
    labels.push_back(random_distribution(rng, k));
  }
  return sll::SoftDataset(std::move(features), std::move(labels));
}

/// `per_class` points per class drawn from unit Gaussians centred at
/// (4*c, 4*c, ...): well separated, so any sensible classifier succeeds.
inline sll::HardDataset blob_dataset(sll::Rng& rng, std::size_t per_class, std::size_t classes,
                                     std::size_t d) {
  sll::Matrix features(per_class * classes, d);
  std::vector<int> labels(per_class * classes);
  std::size_t row = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      for (std::size_t j = 0; j < d; ++j) {
        features(row, j) = rng.normal(4.0 * static_cast<double>(c), 1.0);
      }
      labels[row] = static_cast<int>(c);
    }
  }
  return sll::HardDataset(std::move(features), std::move(labels), classes);
}

/// One-hot soft labels from a hard dataset.
inline sll::SoftDataset to_one_hot(const sll::HardDataset& data) {
  std::vector<sll::ClassDistribution> labels;
  labels.reserve(data.size());
  for (int y : data.labels) labels.push_back(sll::one_hot(y, data.class_count));
  return sll::SoftDataset(data.features, std::move(labels));
}

/// Repeats row i of `data` weights[i] times (in row order) with unit weight.
inline sll::WeightedHardDataset expand_by_weights(const sll::HardDataset& data,
                                                  const std::vector<double>& weights) {
  std::vector<std::size_t> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto copies = static_cast<std::size_t>(std::llround(weights[i]));
    for (std::size_t c = 0; c < copies; ++c) {
      rows.push_back(i);
      labels.push_back(data.labels[i]);
    }
  }
  sll::Matrix features = data.features.select_rows(rows);
  std::vector<double> unit(labels.size(), 1.0);
  return sll::WeightedHardDataset(std::move(features), std::move(labels), std::move(unit),
                                  data.class_count);
}

inline bool matrices_identical(const sll::Matrix& a, const sll::Matrix& b) { return a == b; }

inline double max_abs_diff(const sll::Matrix& a, const sll::Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    }
  }
  return worst;
}

}  // namespace test
