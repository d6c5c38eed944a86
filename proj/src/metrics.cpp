#include "sll/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sll/errors.hpp"

namespace sll {

double tvd(const ClassDistribution& a, const ClassDistribution& b) {
  if (a.size() != b.size()) {
    throw ShapeMismatchError("distributions disagree on class count: " + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()));
  }
  double l1 = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    l1 += std::abs(a[c] - b[c]);
  }
  return 0.5 * l1;
}

double mean_tvd(const Matrix& predicted, const std::vector<ClassDistribution>& target) {
  if (predicted.rows() != target.size()) {
    throw ShapeMismatchError("prediction rows do not match target count");
  }
  if (target.empty()) {
    throw DegenerateDataError("mean tvd over an empty set is undefined");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (predicted.cols() != target[i].size()) {
      throw ShapeMismatchError("prediction columns do not match target class count");
    }
    double l1 = 0.0;
    auto row = predicted.row(i);
    for (std::size_t c = 0; c < target[i].size(); ++c) {
      l1 += std::abs(row[c] - target[i][c]);
    }
    sum += 0.5 * l1;
  }
  return sum / static_cast<double>(target.size());
}

double auc_binary(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw ShapeMismatchError("scores and labels disagree on example count");
  }
  // Sort indices by score; mid-ranks give ties half credit, so the summed
  // positive ranks reproduce the Mann-Whitney U statistic.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::vector<double> rank(scores.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    double mid_rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = mid_rank;
    i = j + 1;
  }

  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] == 1) {
      positive_rank_sum += rank[t];
      ++positives;
    } else if (labels[t] != 0) {
      throw OutOfRangeError("binary auc labels must be 0 or 1, got " + std::to_string(labels[t]));
    }
  }
  std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw SingleClassError("auc needs both classes present");
  }
  double np = static_cast<double>(positives);
  double nn = static_cast<double>(negatives);
  double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

double auc(const Matrix& scores, const std::vector<int>& labels) {
  if (scores.rows() != labels.size()) {
    throw ShapeMismatchError("score rows do not match label count");
  }
  if (labels.empty()) {
    throw DegenerateDataError("auc over an empty set is undefined");
  }
  std::vector<bool> present(scores.cols(), false);
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= scores.cols()) {
      throw OutOfRangeError("label " + std::to_string(label) + " outside score columns");
    }
    present[static_cast<std::size_t>(label)] = true;
  }
  std::size_t present_count = static_cast<std::size_t>(
      std::count(present.begin(), present.end(), true));
  if (present_count < 2) {
    throw SingleClassError("auc needs at least two classes present");
  }
  if (present_count == 2 && scores.cols() == 2) {
    std::vector<double> column(labels.size());
    for (std::size_t r = 0; r < labels.size(); ++r) column[r] = scores(r, 1);
    return auc_binary(column, labels);
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < scores.cols(); ++c) {
    if (!present[c]) continue;
    std::vector<double> column(labels.size());
    std::vector<int> versus_rest(labels.size());
    for (std::size_t r = 0; r < labels.size(); ++r) {
      column[r] = scores(r, c);
      versus_rest[r] = labels[r] == static_cast<int>(c) ? 1 : 0;
    }
    sum += auc_binary(column, versus_rest);
  }
  return sum / static_cast<double>(present_count);
}

}  // namespace sll
