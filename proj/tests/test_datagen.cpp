#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "sll/datagen.hpp"
#include "sll/errors.hpp"
#include "sll/metrics.hpp"

using namespace sll;

namespace {

// Two classes whose separation along feature j is shifts[j] standard
// deviations, so the features are informative in ascending-shift order.
HardDataset graded_dataset(Rng& rng, std::size_t per_class, const std::vector<double>& shifts) {
  const std::size_t d = shifts.size();
  Matrix features(2 * per_class, d, 0.0);
  std::vector<int> labels(2 * per_class);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const int cls = i < per_class ? 0 : 1;
    labels[i] = cls;
    for (std::size_t j = 0; j < d; ++j) {
      features(i, j) = rng.normal(cls == 0 ? 0.0 : shifts[j], 1.0);
    }
  }
  return HardDataset(std::move(features), std::move(labels), 2);
}

std::vector<int> argmax_rows(const Matrix& probs) {
  std::vector<int> labels(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    auto row = probs.row(i);
    labels[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return labels;
}

}  // namespace

TEST_CASE("BaggedTrees aggregates bootstrap trees into valid probabilities") {
  CHECK(BaggedTrees().tree_count() == 50);
  CHECK_THROWS_AS(BaggedTrees(0), OutOfRangeError);

  Rng rng(3);
  HardDataset blobs = test::blob_dataset(rng, 20, 2, 2);
  BaggedTrees forest(10);
  forest.fit(WeightedHardDataset::unit_weights(blobs), 5);
  Matrix probs = forest.predict_proba(blobs.features);
  REQUIRE(probs.rows() == blobs.size());
  REQUIRE(probs.cols() == 2);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(probs(i, c) >= 0.0);
      sum += probs(i, c);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    correct += argmax_rows(probs)[i] == blobs.labels[i];
  }
  CHECK(correct == blobs.size());

  BaggedTrees again(10);
  again.fit(WeightedHardDataset::unit_weights(blobs), 5);
  CHECK(test::matrices_identical(probs, again.predict_proba(blobs.features)));
  auto clone = forest.clone_unfitted();
  CHECK(clone->name() == "BaggedDT");
  CHECK_FALSE(clone->is_fitted());
}

TEST_CASE("ground-truth model names parse and print as a round trip") {
  CHECK(parse_ground_truth_model("LR") == GroundTruthModel::LR);
  CHECK(parse_ground_truth_model("bagged-DT") == GroundTruthModel::BaggedDT);
  CHECK(ground_truth_model_name(GroundTruthModel::LR) == "LR");
  CHECK(ground_truth_model_name(GroundTruthModel::BaggedDT) == "bagged-DT");
  CHECK_THROWS_AS(parse_ground_truth_model("forest"), SchemaError);
}

TEST_CASE("ground-truth labels are the oracle's own argmax predictions") {
  Rng rng(12);
  HardDataset blobs = test::blob_dataset(rng, 15, 2, 2);
  for (GroundTruthModel kind : {GroundTruthModel::LR, GroundTruthModel::BaggedDT}) {
    GroundTruth gt = build_ground_truth(blobs, kind, 21);
    CHECK(test::matrices_identical(gt.dataset.features, blobs.features));
    CHECK(gt.dataset.class_count == blobs.class_count);
    // Relabelling makes the model a perfect oracle of its own dataset.
    CHECK(gt.dataset.labels == argmax_rows(gt.model->predict_proba(blobs.features)));
  }
  // On well-separated blobs the linear model reproduces the original labels.
  GroundTruth lr = build_ground_truth(blobs, GroundTruthModel::LR, 21);
  CHECK(lr.dataset.labels == blobs.labels);
}

TEST_CASE("build_ground_truth is seed deterministic for the randomized model") {
  Rng rng(13);
  HardDataset data = graded_dataset(rng, 40, {0.0, 0.8, 1.6});
  GroundTruth a = build_ground_truth(data, GroundTruthModel::BaggedDT, 99);
  GroundTruth b = build_ground_truth(data, GroundTruthModel::BaggedDT, 99);
  CHECK(a.dataset.labels == b.dataset.labels);
  CHECK(test::matrices_identical(a.model->predict_proba(data.features),
                                 b.model->predict_proba(data.features)));
  GroundTruth c = build_ground_truth(data, GroundTruthModel::BaggedDT, 100);
  CHECK_FALSE(test::matrices_identical(a.model->predict_proba(data.features),
                                       c.model->predict_proba(data.features)));
}

TEST_CASE("feature importance ranks noise below signal for both oracle kinds") {
  Rng rng(14);
  HardDataset data = graded_dataset(rng, 60, {0.0, 0.0, 3.0});
  for (GroundTruthModel kind : {GroundTruthModel::LR, GroundTruthModel::BaggedDT}) {
    GroundTruth gt = build_ground_truth(data, kind, 7);
    std::vector<std::size_t> order = feature_importance(gt, 11);
    REQUIRE(order.size() == 3);
    // Ascending importance: the strongly separating column comes last.
    CHECK(order[2] == 2);
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::size_t>{0, 1, 2});
  }
}

TEST_CASE("hide_features aggregates oracle votes over hidden-block redraws") {
  Rng rng(15);
  HardDataset data = graded_dataset(rng, 40, {0.3, 1.0, 2.0});
  GroundTruth gt = build_ground_truth(data, GroundTruthModel::LR, 3);

  PartialGroundTruth pg = hide_features(gt, {0}, 8, 77);
  CHECK(pg.hidden == std::vector<std::size_t>{0});
  CHECK(pg.visible == std::vector<std::size_t>{1, 2});
  CHECK(pg.resample_count == 8);
  REQUIRE(pg.dataset.size() == data.size());
  REQUIRE(pg.dataset.features.cols() == 2);
  // Visible columns pass through untouched.
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(pg.dataset.features(i, 0) == data.features(i, 1));
    CHECK(pg.dataset.features(i, 1) == data.features(i, 2));
  }
  // Labels are vote frequencies: exact multiples of 1/8.
  for (const ClassDistribution& label : pg.dataset.labels) {
    for (std::size_t c = 0; c < label.size(); ++c) {
      CHECK(label[c] * 8.0 == std::round(label[c] * 8.0));
    }
  }
  // The reported distortion is the mean distance to the one-hot labels.
  double tvd_sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    tvd_sum += tvd(pg.dataset.labels[i], one_hot(gt.dataset.labels[i], 2));
  }
  CHECK(pg.achieved_tvd == doctest::Approx(tvd_sum / data.size()).epsilon(1e-12));

  // Bitwise reproducible.
  PartialGroundTruth same = hide_features(gt, {0}, 8, 77);
  CHECK(test::matrices_identical(same.dataset.features, pg.dataset.features));
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(same.dataset.labels[i] == pg.dataset.labels[i]);
  }
  CHECK(same.achieved_tvd == pg.achieved_tvd);

  // A single resample gives one-hot labels.
  PartialGroundTruth single = hide_features(gt, {0, 1}, 1, 5);
  for (const ClassDistribution& label : single.dataset.labels) {
    CHECK(label.max_prob() == 1.0);
  }
}

TEST_CASE("hide_features validates the hidden set") {
  Rng rng(16);
  HardDataset data = graded_dataset(rng, 20, {0.5, 1.0, 2.0});
  GroundTruth gt = build_ground_truth(data, GroundTruthModel::LR, 3);
  CHECK_THROWS_AS(hide_features(gt, {}, 10, 1), OutOfRangeError);
  CHECK_THROWS_AS(hide_features(gt, {0, 1, 2}, 10, 1), OutOfRangeError);
  CHECK_THROWS_AS(hide_features(gt, {0, 0}, 10, 1), OutOfRangeError);
  CHECK_THROWS_AS(hide_features(gt, {3}, 10, 1), OutOfRangeError);
  CHECK_THROWS_AS(hide_features(gt, {0}, 0, 1), OutOfRangeError);
}

TEST_CASE("hiding more important features cannot reduce label distortion much") {
  Rng rng(18);
  HardDataset data = graded_dataset(rng, 50, {0.2, 0.8, 1.6, 3.0});
  GroundTruth gt = build_ground_truth(data, GroundTruthModel::LR, 9);
  std::vector<std::size_t> order = feature_importance(gt, 1);
  double previous = 0.0;
  for (std::size_t p = 1; p <= 3; ++p) {
    std::vector<std::size_t> hidden(order.begin(), order.begin() + p);
    PartialGroundTruth pg = hide_features(gt, std::move(hidden), 150, derive_seed(4, {p}));
    CHECK(pg.achieved_tvd >= previous - 0.01);
    CHECK(pg.achieved_tvd >= 0.0);
    CHECK(pg.achieved_tvd <= 1.0);
    previous = pg.achieved_tvd;
  }
}

TEST_CASE("uncertainty-level selection returns a low and a high distortion prefix") {
  Rng rng(19);
  HardDataset data = graded_dataset(rng, 50, {0.2, 0.8, 1.6, 3.0});
  GroundTruth gt = build_ground_truth(data, GroundTruthModel::LR, 2);
  auto [low, high] = select_uncertainty_levels(gt, 100, 31);
  CHECK(low.achieved_tvd <= high.achieved_tvd + 1e-12);
  CHECK(low.hidden.size() >= 1);
  CHECK(high.hidden.size() <= 3);
  // On a strongly graded dataset the two levels differ and nest.
  CHECK(low.hidden.size() < high.hidden.size());
  for (std::size_t h = 0; h < low.hidden.size(); ++h) {
    CHECK(std::count(high.hidden.begin(), high.hidden.end(), low.hidden[h]) == 1);
  }
  // Deterministic in the seed.
  auto [low2, high2] = select_uncertainty_levels(gt, 100, 31);
  CHECK(low2.hidden == low.hidden);
  CHECK(high2.hidden == high.hidden);
  CHECK(low2.achieved_tvd == low.achieved_tvd);
  CHECK(high2.achieved_tvd == high.achieved_tvd);
}

TEST_CASE("uncertainty-level selection needs at least three features") {
  Rng rng(20);
  HardDataset narrow = graded_dataset(rng, 20, {0.5, 2.0});
  GroundTruth gt = build_ground_truth(narrow, GroundTruthModel::LR, 2);
  CHECK_THROWS_AS(select_uncertainty_levels(gt, 50, 1), TooFewFeaturesError);
}
