#include "sll/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sll/errors.hpp"
#include "sll/metrics.hpp"
#include "sll/parallel.hpp"
#include "sll/techniques.hpp"

namespace sll {

namespace {

constexpr std::size_t kImportanceShuffles = 5;

std::vector<int> argmax_rows(const Matrix& probs) {
  std::vector<int> labels(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    auto row = probs.row(i);
    labels[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return labels;
}

}  // namespace

BaggedTrees::BaggedTrees(std::size_t tree_count) : tree_count_(tree_count) {
  if (tree_count_ < 1) throw OutOfRangeError("a bagged ensemble needs at least one tree");
}

std::unique_ptr<ProbabilisticClassifier> BaggedTrees::clone_unfitted() const {
  return std::make_unique<BaggedTrees>(tree_count_);
}

void BaggedTrees::do_fit(const WeightedHardDataset& data, Rng& rng) {
  trees_.clear();
  trees_.reserve(tree_count_);
  const std::size_t n = data.size();
  for (std::size_t t = 0; t < tree_count_; ++t) {
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = rng.below(n);
    std::vector<int> labels(n);
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = data.labels[indices[i]];
      weights[i] = data.weights[indices[i]];
    }
    WeightedHardDataset sample(data.features.select_rows(indices), std::move(labels),
                               std::move(weights), data.class_count);
    auto tree = std::make_unique<DecisionTree>();
    // Bootstrap draws can isolate a single class; retry with fresh draws a
    // few times before giving up on pathological inputs.
    std::size_t retries = 0;
    while (true) {
      try {
        tree->fit(sample, rng.next());
        break;
      } catch (const SingleClassError&) {
        if (++retries > 100) throw;
        for (std::size_t i = 0; i < n; ++i) indices[i] = rng.below(n);
        std::vector<int> retry_labels(n);
        std::vector<double> retry_weights(n);
        for (std::size_t i = 0; i < n; ++i) {
          retry_labels[i] = data.labels[indices[i]];
          retry_weights[i] = data.weights[indices[i]];
        }
        sample = WeightedHardDataset(data.features.select_rows(indices), std::move(retry_labels),
                                     std::move(retry_weights), data.class_count);
      }
    }
    trees_.push_back(std::move(tree));
  }
}

Matrix BaggedTrees::do_predict_proba(const Matrix& features) const {
  std::vector<Matrix> outputs;
  outputs.reserve(trees_.size());
  for (const auto& tree : trees_) outputs.push_back(tree->predict_proba(features));
  return average_probs(outputs);
}

GroundTruthModel parse_ground_truth_model(std::string_view name) {
  if (name == "LR") return GroundTruthModel::LR;
  if (name == "bagged-DT") return GroundTruthModel::BaggedDT;
  throw SchemaError("unknown ground-truth model '" + std::string(name) +
                    "'; expected LR or bagged-DT");
}

std::string ground_truth_model_name(GroundTruthModel kind) {
  return kind == GroundTruthModel::LR ? "LR" : "bagged-DT";
}

GroundTruth build_ground_truth(const HardDataset& raw, GroundTruthModel kind,
                               std::uint64_t seed) {
  std::shared_ptr<ProbabilisticClassifier> model;
  if (kind == GroundTruthModel::LR) {
    model = std::make_shared<LogisticRegression>();
  } else {
    model = std::make_shared<BaggedTrees>();
  }
  model->fit(WeightedHardDataset::unit_weights(raw), seed);
  std::vector<int> relabelled = argmax_rows(model->predict_proba(raw.features));
  HardDataset dataset(raw.features, std::move(relabelled), raw.class_count);
  return GroundTruth{std::move(model), std::move(dataset)};
}

std::vector<std::size_t> feature_importance(const GroundTruth& gt, std::uint64_t seed) {
  const std::size_t d = gt.dataset.features.cols();
  std::vector<double> importance(d, 0.0);

  if (const auto* lr = dynamic_cast<const LogisticRegression*>(gt.model.get())) {
    const Matrix& coef = lr->coefficients();
    for (std::size_t j = 0; j < d; ++j) {
      double sum = 0.0;
      for (std::size_t c = 0; c < coef.rows(); ++c) sum += std::abs(coef(c, j));
      importance[j] = sum / static_cast<double>(coef.rows());
    }
  } else {
    // Permutation importance: accuracy drop against the model's own labels
    // when one column is shuffled, averaged over several shuffles.
    const Matrix& x = gt.dataset.features;
    const std::size_t n = x.rows();
    Rng rng(seed);
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < d; ++j) {
      double dropped = 0.0;
      for (std::size_t s = 0; s < kImportanceShuffles; ++s) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm);
        Matrix shuffled = x;
        for (std::size_t i = 0; i < n; ++i) shuffled(i, j) = x(perm[i], j);
        const std::vector<int> pred = argmax_rows(gt.model->predict_proba(shuffled));
        double correct = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (pred[i] == gt.dataset.labels[i]) correct += 1.0;
        }
        dropped += 1.0 - correct / static_cast<double>(n);
      }
      importance[j] = dropped / static_cast<double>(kImportanceShuffles);
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return importance[a] < importance[b]; });
  return order;
}

PartialGroundTruth hide_features(const GroundTruth& gt, std::vector<std::size_t> hidden,
                                 std::size_t resamples, std::uint64_t seed) {
  const Matrix& x = gt.dataset.features;
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const std::size_t k = gt.dataset.class_count;
  if (resamples < 1) throw OutOfRangeError("at least one resample is required");

  std::set<std::size_t> hidden_set(hidden.begin(), hidden.end());
  if (hidden_set.size() != hidden.size()) {
    throw OutOfRangeError("hidden feature indices must be distinct");
  }
  if (hidden.empty() || hidden.size() >= d) {
    throw OutOfRangeError("the hidden set must leave at least one visible feature and hide at "
                          "least one");
  }
  for (std::size_t j : hidden) {
    if (j >= d) throw OutOfRangeError("hidden feature index out of range");
  }
  std::sort(hidden.begin(), hidden.end());
  std::vector<std::size_t> visible;
  for (std::size_t j = 0; j < d; ++j) {
    if (!hidden_set.count(j)) visible.push_back(j);
  }

  // Gaussian KDE over the hidden block: a draw picks a random training row
  // and jitters each hidden column by Scott's bandwidth
  // n^(-1/(h+4)) * sd_j.
  const double factor =
      std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(hidden.size()) + 4.0));
  std::vector<double> bandwidth(hidden.size(), 0.0);
  for (std::size_t h = 0; h < hidden.size(); ++h) {
    const std::size_t j = hidden[h];
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = x(i, j) - mean;
      var += dev * dev;
    }
    var /= static_cast<double>(n > 1 ? n - 1 : 1);
    bandwidth[h] = factor * std::sqrt(var);
  }

  // votes[i * k + c] counts resamples predicting class c for instance i;
  // filled per resample in parallel, reduced deterministically afterwards.
  std::vector<std::vector<int>> resample_predictions(resamples);
  parallel_for(resamples, [&](std::size_t r) {
    Rng rng(derive_seed(seed, {r}));
    Matrix redrawn = x;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t source = rng.below(n);
      for (std::size_t h = 0; h < hidden.size(); ++h) {
        const std::size_t j = hidden[h];
        redrawn(i, j) = x(source, j) + (bandwidth[h] > 0.0 ? rng.normal(0.0, bandwidth[h]) : 0.0);
      }
    }
    resample_predictions[r] = argmax_rows(gt.model->predict_proba(redrawn));
  });

  std::vector<std::size_t> votes(n * k, 0);
  for (std::size_t r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      votes[i * k + static_cast<std::size_t>(resample_predictions[r][i])] += 1;
    }
  }

  std::vector<ClassDistribution> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> probs(k);
    for (std::size_t c = 0; c < k; ++c) {
      probs[c] = static_cast<double>(votes[i * k + c]) / static_cast<double>(resamples);
    }
    labels.push_back(ClassDistribution(std::move(probs)));
  }

  double tvd_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tvd_sum += tvd(labels[i], one_hot(gt.dataset.labels[i], k));
  }

  SoftDataset dataset(x.select_cols(visible), std::move(labels));
  PartialGroundTruth out;
  out.visible = std::move(visible);
  out.hidden = std::move(hidden);
  out.dataset = std::move(dataset);
  out.resample_count = resamples;
  out.achieved_tvd = tvd_sum / static_cast<double>(n);
  return out;
}

std::pair<PartialGroundTruth, PartialGroundTruth> select_uncertainty_levels(
    const GroundTruth& gt, std::size_t resamples, std::uint64_t seed) {
  const std::size_t d = gt.dataset.features.cols();
  if (d < 3) {
    throw TooFewFeaturesError("uncertainty-level selection needs at least 3 features, got " +
                              std::to_string(d));
  }
  const std::vector<std::size_t> order = feature_importance(gt, derive_seed(seed, {0}));

  std::vector<PartialGroundTruth> prefixes;
  prefixes.reserve(d - 1);
  for (std::size_t p = 1; p <= d - 1; ++p) {
    std::vector<std::size_t> hidden(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p));
    prefixes.push_back(hide_features(gt, std::move(hidden), resamples, derive_seed(seed, {1, p})));
  }

  const double tvd_first = prefixes.front().achieved_tvd;
  const double tvd_last = prefixes.back().achieved_tvd;
  const double target_low = tvd_first + (tvd_last - tvd_first) / 3.0;
  const double target_high = tvd_first + 2.0 * (tvd_last - tvd_first) / 3.0;

  auto closest = [&](double target) {
    std::size_t best = 0;
    double best_gap = std::abs(prefixes[0].achieved_tvd - target);
    for (std::size_t p = 1; p < prefixes.size(); ++p) {
      const double gap = std::abs(prefixes[p].achieved_tvd - target);
      if (gap < best_gap) {
        best_gap = gap;
        best = p;
      }
    }
    return best;
  };

  const std::size_t low_index = closest(target_low);
  const std::size_t high_index = closest(target_high);
  return {prefixes[low_index], prefixes[high_index]};
}

}  // namespace sll
