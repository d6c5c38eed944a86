#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "sll/classifiers.hpp"
#include "sll/errors.hpp"

namespace sll {

namespace {

// Gini impurity times total weight: W * (1 - sum_c (W_c/W)^2). Working with
// the weighted form keeps split comparisons free of an extra division.
double weighted_gini(const std::vector<double>& class_weights, double total) {
  if (total <= 0.0) return 0.0;
  double sum_sq = 0.0;
  for (double w : class_weights) sum_sq += w * w;
  return total - sum_sq / total;
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::unique_ptr<ProbabilisticClassifier> DecisionTree::clone_unfitted() const {
  return std::make_unique<DecisionTree>();
}

void DecisionTree::do_fit(const WeightedHardDataset& data, Rng& rng) {
  nodes_.clear();
  std::vector<std::size_t> rows;
  rows.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.weights[i] > 0.0) rows.push_back(i);
  }
  root_ = build_node(data.features, data.labels, data.weights, rows, 0, rows.size(),
                     data.class_count, rng);
}

std::size_t DecisionTree::build_node(const Matrix& x, const std::vector<int>& y,
                                     const std::vector<double>& w,
                                     std::vector<std::size_t>& rows, std::size_t begin,
                                     std::size_t end, std::size_t k, Rng& rng) {
  std::vector<double> class_weights(k, 0.0);
  double total = 0.0;
  for (std::size_t p = begin; p < end; ++p) {
    class_weights[static_cast<std::size_t>(y[rows[p]])] += w[rows[p]];
    total += w[rows[p]];
  }

  std::size_t positive_classes = 0;
  for (double cw : class_weights) positive_classes += cw > 0.0 ? 1 : 0;

  auto make_leaf = [&]() {
    Node leaf;
    leaf.class_weights = class_weights;
    nodes_.push_back(std::move(leaf));
    return nodes_.size() - 1;
  };

  // Pure nodes become leaves without consuming any randomness, so trees
  // built from weighted rows and from duplicated rows draw identical
  // feature subsets at identical positions.
  if (positive_classes <= 1) return make_leaf();

  const std::size_t d = x.cols();
  const auto subset_size =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

  // Partial Fisher-Yates draw of `subset_size` distinct features.
  std::vector<std::size_t> pool(d);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < subset_size; ++i) {
    const std::size_t j = i + rng.below(d - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> candidates(pool.begin(),
                                      pool.begin() + static_cast<std::ptrdiff_t>(subset_size));
  std::sort(candidates.begin(), candidates.end());

  const double parent_score = weighted_gini(class_weights, total);
  int best_feature = -1;
  double best_threshold = 0.0;
  double best_score = parent_score;

  std::vector<std::pair<double, std::size_t>> order;
  std::vector<double> left_weights(k);
  std::vector<double> right_weights(k);
  for (std::size_t f : candidates) {
    order.clear();
    for (std::size_t p = begin; p < end; ++p) {
      order.emplace_back(x(rows[p], f), rows[p]);
    }
    std::sort(order.begin(), order.end());

    std::fill(left_weights.begin(), left_weights.end(), 0.0);
    double left_total = 0.0;
    for (std::size_t p = 0; p + 1 < order.size(); ++p) {
      const std::size_t row = order[p].second;
      left_weights[static_cast<std::size_t>(y[row])] += w[row];
      left_total += w[row];
      const double lo = order[p].first;
      const double hi = order[p + 1].first;
      if (lo == hi) continue;
      const double threshold = lo + (hi - lo) / 2.0;
      for (std::size_t c = 0; c < k; ++c) right_weights[c] = class_weights[c] - left_weights[c];
      const double score = weighted_gini(left_weights, left_total) +
                           weighted_gini(right_weights, total - left_total);
      // Strict improvement required; ties keep the earlier (lower feature,
      // then lower threshold) candidate.
      if (score < best_score) {
        best_score = score;
        best_feature = static_cast<int>(f);
        best_threshold = threshold;
      }
    }
  }

  if (best_feature < 0) return make_leaf();

  const auto mid = static_cast<std::size_t>(
      std::stable_partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                            rows.begin() + static_cast<std::ptrdiff_t>(end),
                            [&](std::size_t r) {
                              return x(r, static_cast<std::size_t>(best_feature)) <=
                                     best_threshold;
                            }) -
      rows.begin());

  const std::size_t left = build_node(x, y, w, rows, begin, mid, k, rng);
  const std::size_t right = build_node(x, y, w, rows, mid, end, k, rng);
  Node node;
  node.feature = best_feature;
  node.threshold = best_threshold;
  node.left = left;
  node.right = right;
  node.class_weights = std::move(class_weights);
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

Matrix DecisionTree::do_predict_proba(const Matrix& features) const {
  const std::size_t k = nodes_[root_].class_weights.size();
  Matrix out(features.rows(), k, 0.0);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto row = features.row(i);
    std::size_t node = root_;
    while (nodes_[node].feature >= 0) {
      node = row[static_cast<std::size_t>(nodes_[node].feature)] <= nodes_[node].threshold
                 ? nodes_[node].left
                 : nodes_[node].right;
    }
    const auto& counts = nodes_[node].class_weights;
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    for (std::size_t c = 0; c < k; ++c) out(i, c) = counts[c] / total;
  }
  return out;
}

std::string DecisionTree::structure_string() const {
  if (!is_fitted()) throw NotFittedError("DT was asked for its structure before fit");
  std::string out;
  auto walk = [&](auto&& self, std::size_t idx) -> void {
    const Node& node = nodes_[idx];
    if (node.feature < 0) {
      out += "leaf[";
      for (std::size_t c = 0; c < node.class_weights.size(); ++c) {
        if (c) out += ',';
        append_double(out, node.class_weights[c]);
      }
      out += ']';
      return;
    }
    out += "split(f";
    out += std::to_string(node.feature);
    out += "<=";
    append_double(out, node.threshold);
    out += ")(";
    self(self, node.left);
    out += ")(";
    self(self, node.right);
    out += ')';
  };
  walk(walk, root_);
  return out;
}

std::unique_ptr<ProbabilisticClassifier> make_base_classifier(std::string_view name) {
  if (name == "GNB") return std::make_unique<GaussianNB>();
  if (name == "LR") return std::make_unique<LogisticRegression>();
  if (name == "SGDHuber") return std::make_unique<SGDHuber>();
  if (name == "DT") return std::make_unique<DecisionTree>();
  throw SchemaError("unknown base classifier '" + std::string(name) +
                    "'; expected GNB, LR, SGDHuber or DT");
}

const std::vector<std::string>& base_classifier_names() {
  static const std::vector<std::string> names = {"GNB", "LR", "SGDHuber", "DT"};
  return names;
}

}  // namespace sll
