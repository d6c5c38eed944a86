#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sll/classifiers.hpp"
#include "sll/core.hpp"

namespace sll {

/// Bagging ensemble of decision trees (bootstrap sample per tree, averaged
/// probabilities) — the toolkit's random-forest stand-in for ground-truth
/// models.
class BaggedTrees final : public ProbabilisticClassifier {
 public:
  explicit BaggedTrees(std::size_t tree_count = 50);

  std::string_view name() const override { return "BaggedDT"; }
  std::unique_ptr<ProbabilisticClassifier> clone_unfitted() const override;
  std::size_t tree_count() const { return tree_count_; }

 protected:
  void do_fit(const WeightedHardDataset& data, Rng& rng) override;
  Matrix do_predict_proba(const Matrix& features) const override;

 private:
  std::size_t tree_count_;
  std::vector<std::unique_ptr<ProbabilisticClassifier>> trees_;
};

enum class GroundTruthModel { LR, BaggedDT };

GroundTruthModel parse_ground_truth_model(std::string_view name);
std::string ground_truth_model_name(GroundTruthModel kind);

/// A fitted model together with the dataset it relabelled: every label is
/// the model's own argmax prediction, making the model the exact oracle.
struct GroundTruth {
  std::shared_ptr<const ProbabilisticClassifier> model;
  HardDataset dataset;
};

/// Soft-labelled counterpart of a GroundTruth after hiding some features:
/// the features are the visible columns only, each soft label the frequency
/// of the oracle's predictions across KDE redraws of the hidden block.
struct PartialGroundTruth {
  std::vector<std::size_t> visible;
  std::vector<std::size_t> hidden;
  SoftDataset dataset;
  std::size_t resample_count = 0;
  double achieved_tvd = 0.0;
};

/// Fits the oracle model on the raw data and replaces the labels by the
/// model's argmax predictions.
GroundTruth build_ground_truth(const HardDataset& raw, GroundTruthModel kind, std::uint64_t seed);

/// Feature indices sorted by ascending importance (least informative first;
/// ties to the lowest index). LR ranks by mean absolute coefficient across
/// classes; BaggedDT by permutation importance (mean accuracy drop over 5
/// column shuffles, which is where the seed enters).
std::vector<std::size_t> feature_importance(const GroundTruth& gt, std::uint64_t seed);

/// Replaces the hidden columns with joint Gaussian-KDE redraws (kernel
/// centred on a random training row, per-column Scott bandwidth), predicts
/// with the oracle, and aggregates `resamples` predictions per instance into
/// a soft label. The returned features contain only the visible columns.
PartialGroundTruth hide_features(const GroundTruth& gt, std::vector<std::size_t> hidden,
                                 std::size_t resamples, std::uint64_t seed);

/// Sweeps hidden prefixes in increasing-importance order and returns the
/// prefixes whose mean TVD against the one-hot ground-truth labels comes
/// closest to one third (low) and two thirds (high) of the way between the
/// one-feature and the all-but-one-feature TVD.
std::pair<PartialGroundTruth, PartialGroundTruth> select_uncertainty_levels(
    const GroundTruth& gt, std::size_t resamples, std::uint64_t seed);

}  // namespace sll
