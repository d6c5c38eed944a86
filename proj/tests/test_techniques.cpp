#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "sll/errors.hpp"
#include "sll/techniques.hpp"

using namespace sll;

namespace {

// Three instances with plurality probabilities 0.9, 0.5 and 0.7 spread over
// two distinct plurality classes, so a single drop leaves a usable dataset.
SoftDataset three_instance_set() {
  Matrix features = Matrix::from_rows({{0.0, 10.0}, {1.0, 11.0}, {2.0, 12.0}});
  std::vector<ClassDistribution> labels = {ClassDistribution({0.9, 0.05, 0.05}),
                                           ClassDistribution({0.5, 0.25, 0.25}),
                                           ClassDistribution({0.15, 0.7, 0.15})};
  return SoftDataset(std::move(features), std::move(labels));
}

}  // namespace

TEST_CASE("percentile threshold drops the floor(fraction * n) least confident instances") {
  SoftDataset data = three_instance_set();
  SoftDataset kept = threshold_filter(data, ThresholdRule::percentile(1.0 / 3.0));
  REQUIRE(kept.size() == 2);
  // The 0.5-confidence instance (row 1) goes; survivors keep their order.
  CHECK(kept.features(0, 0) == 0.0);
  CHECK(kept.features(1, 0) == 2.0);
  CHECK(kept.labels[0] == data.labels[0]);
  CHECK(kept.labels[1] == data.labels[2]);
}

TEST_CASE("percentile threshold of zero is the identity filter") {
  SoftDataset data = three_instance_set();
  SoftDataset kept = threshold_filter(data, ThresholdRule::percentile(0.0));
  REQUIRE(kept.size() == data.size());
  CHECK(test::matrices_identical(kept.features, data.features));
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(kept.labels[i] == data.labels[i]);
}

TEST_CASE("percentile threshold breaks confidence ties by original index") {
  Matrix features = Matrix::from_rows({{0.0}, {1.0}, {2.0}, {3.0}});
  std::vector<ClassDistribution> labels = {ClassDistribution({0.6, 0.4}),
                                           ClassDistribution({0.5, 0.5}),
                                           ClassDistribution({0.5, 0.5}),
                                           ClassDistribution({0.1, 0.9})};
  SoftDataset data(std::move(features), std::move(labels));
  SoftDataset kept = threshold_filter(data, ThresholdRule::percentile(0.25));
  REQUIRE(kept.size() == 3);
  // Rows 1 and 2 tie at confidence 0.5; the earlier row drops first.
  CHECK(kept.features(0, 0) == 0.0);
  CHECK(kept.features(1, 0) == 2.0);
  CHECK(kept.features(2, 0) == 3.0);
}

TEST_CASE("percentile drop count floors fractional products") {
  Matrix features(5, 1, 0.0);
  for (std::size_t i = 0; i < 5; ++i) features(i, 0) = static_cast<double>(i);
  std::vector<ClassDistribution> labels;
  labels.emplace_back(std::vector<double>{0.9, 0.1});
  labels.emplace_back(std::vector<double>{0.8, 0.2});
  labels.emplace_back(std::vector<double>{0.3, 0.7});
  labels.emplace_back(std::vector<double>{0.2, 0.8});
  labels.emplace_back(std::vector<double>{0.4, 0.6});
  SoftDataset data(std::move(features), std::move(labels));
  // floor(0.5 * 5) = 2 drops: the 0.6 and 0.7 plurality rows.
  SoftDataset kept = threshold_filter(data, ThresholdRule::percentile(0.5));
  REQUIRE(kept.size() == 3);
  CHECK(kept.features(0, 0) == 0.0);
  CHECK(kept.features(1, 0) == 1.0);
  CHECK(kept.features(2, 0) == 3.0);
}

TEST_CASE("bound threshold keeps instances at or above the bound") {
  Matrix features = Matrix::from_rows({{0.0}, {1.0}, {2.0}, {3.0}});
  std::vector<ClassDistribution> labels = {ClassDistribution({0.9, 0.1}),
                                           ClassDistribution({0.55, 0.45}),
                                           ClassDistribution({0.3, 0.7}),
                                           ClassDistribution({0.4, 0.6})};
  SoftDataset data(std::move(features), std::move(labels));
  SoftDataset kept = threshold_filter(data, ThresholdRule::bound(0.7));
  REQUIRE(kept.size() == 2);
  CHECK(kept.features(0, 0) == 0.0);
  CHECK(kept.features(1, 0) == 2.0);
  // An instance sitting exactly on the bound survives: every plurality
  // probability here is >= 0.55, so nothing is dropped.
  SoftDataset at_bound = threshold_filter(data, ThresholdRule::bound(0.55));
  CHECK(at_bound.size() == 4);
}

TEST_CASE("bound equal to 1/k keeps every instance") {
  SoftDataset data = three_instance_set();
  SoftDataset kept = threshold_filter(data, ThresholdRule::bound(1.0 / 3.0));
  REQUIRE(kept.size() == data.size());
  CHECK(test::matrices_identical(kept.features, data.features));
}

TEST_CASE("threshold filters that leave too little data are rejected") {
  SoftDataset data = three_instance_set();
  // Bound 0.8 keeps only the 0.9 instance: fewer than two survivors.
  CHECK_THROWS_AS(threshold_filter(data, ThresholdRule::bound(0.8)), DegenerateFilterError);
  // Dropping the class-1 instance leaves a single plurality class.
  Matrix features = Matrix::from_rows({{0.0}, {1.0}, {2.0}});
  std::vector<ClassDistribution> labels = {ClassDistribution({0.9, 0.1}),
                                           ClassDistribution({0.8, 0.2}),
                                           ClassDistribution({0.4, 0.6})};
  SoftDataset one_class(std::move(features), std::move(labels));
  CHECK_THROWS_AS(threshold_filter(one_class, ThresholdRule::bound(0.7)),
                  DegenerateFilterError);
}

TEST_CASE("threshold rule constructors validate their arguments") {
  CHECK_THROWS_AS(ThresholdRule::percentile(-0.1), OutOfRangeError);
  CHECK_THROWS_AS(ThresholdRule::percentile(1.0), OutOfRangeError);
  CHECK_THROWS_AS(ThresholdRule::bound(0.0), OutOfRangeError);
  CHECK_THROWS_AS(ThresholdRule::bound(1.2), OutOfRangeError);
  // Bounds below 1/k would filter nothing meaningful and are rejected at use.
  SoftDataset data = three_instance_set();
  CHECK_THROWS_AS(threshold_filter(data, ThresholdRule::bound(0.2)), OutOfRangeError);
}

TEST_CASE("plurality_vote returns the plurality class and its probability") {
  PluralityVote v = plurality_vote(ClassDistribution({0.2, 0.5, 0.3}));
  CHECK(v.cls == 1);
  CHECK(v.weight == 0.5);
  PluralityVote certain = plurality_vote(one_hot(1, 2));
  CHECK(certain.cls == 1);
  CHECK(certain.weight == 1.0);
  PluralityVote tied = plurality_vote(ClassDistribution({0.5, 0.5}));
  CHECK(tied.cls == 0);
  CHECK(tied.weight == 0.5);
}

TEST_CASE("bootstrap_sample draws uniformly with replacement") {
  Rng rng(101);
  std::vector<std::size_t> indices = bootstrap_sample(5, 50000, rng);
  REQUIRE(indices.size() == 50000);
  std::vector<std::size_t> counts(5, 0);
  for (std::size_t idx : indices) {
    REQUIRE(idx < 5);
    ++counts[idx];
  }
  // Each index is a Binomial(50000, 0.2) count; allow three standard
  // deviations around the mean of 10000.
  const double sigma = std::sqrt(50000.0 * 0.2 * 0.8);
  for (std::size_t c : counts) {
    CHECK(static_cast<double>(c) > 10000.0 - 3.0 * sigma);
    CHECK(static_cast<double>(c) < 10000.0 + 3.0 * sigma);
  }
}

TEST_CASE("bootstrap_sample is seed deterministic and rejects empty input") {
  Rng a(7);
  Rng b(7);
  CHECK(bootstrap_sample(10, 100, a) == bootstrap_sample(10, 100, b));
  Rng c(7);
  CHECK_THROWS_AS(bootstrap_sample(0, 10, c), DegenerateDataError);
}

TEST_CASE("max_sample draws instances in proportion to plurality probability") {
  Matrix features = Matrix::from_rows({{0.0}, {1.0}});
  std::vector<ClassDistribution> labels = {ClassDistribution({1.0, 0.0}),
                                           ClassDistribution({0.5, 0.5})};
  SoftDataset data(std::move(features), std::move(labels));
  Rng rng(55);
  std::vector<std::size_t> indices = max_sample(data, 30000, rng);
  REQUIRE(indices.size() == 30000);
  std::size_t zeros = 0;
  for (std::size_t idx : indices) {
    REQUIRE(idx < 2);
    zeros += idx == 0;
  }
  // Weights 1.0 : 0.5 give index 0 probability 2/3.
  const double expected = 30000.0 * 2.0 / 3.0;
  const double sigma = std::sqrt(30000.0 * (2.0 / 3.0) * (1.0 / 3.0));
  CHECK(static_cast<double>(zeros) > expected - 3.0 * sigma);
  CHECK(static_cast<double>(zeros) < expected + 3.0 * sigma);
}

TEST_CASE("duplicate expands soft labels into weighted hard copies") {
  Matrix features = Matrix::from_rows({{0.0, 5.0}, {1.0, 6.0}});
  std::vector<ClassDistribution> labels = {ClassDistribution({0.5, 0.25, 0.25}),
                                           one_hot(1, 3)};
  SoftDataset data(std::move(features), std::move(labels));
  WeightedHardDataset expanded = duplicate(data);
  // Instance 0 contributes one copy per class; the one-hot instance
  // contributes a single copy because zero-probability copies are dropped.
  REQUIRE(expanded.size() == 4);
  CHECK(expanded.labels == std::vector<int>{0, 1, 2, 1});
  CHECK(expanded.weights == std::vector<double>{0.5, 0.25, 0.25, 1.0});
  for (std::size_t row = 0; row < 3; ++row) {
    CHECK(expanded.features(row, 0) == 0.0);
    CHECK(expanded.features(row, 1) == 5.0);
  }
  CHECK(expanded.features(3, 0) == 1.0);
  CHECK(expanded.features(3, 1) == 6.0);
  CHECK(expanded.class_count == 3);
  CHECK(expanded.total_weight() == 2.0);
}

TEST_CASE("duplicate conserves total weight equal to the instance count") {
  Rng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    const std::size_t k = 2 + rng.below(4);
    SoftDataset data = test::random_soft_dataset(rng, n, k, 3);
    WeightedHardDataset expanded = duplicate(data);
    CHECK(expanded.total_weight() == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    CHECK(expanded.size() <= n * k);
    for (double w : expanded.weights) CHECK(w > 0.0);
  }
}

TEST_CASE("label_sample draws classes with the label's probabilities") {
  Rng rng(303);
  for (int draw = 0; draw < 100; ++draw) {
    CHECK(label_sample(one_hot(1, 3), rng) == 1);
  }
  std::size_t zeros = 0;
  const ClassDistribution biased({0.7, 0.3});
  for (int draw = 0; draw < 30000; ++draw) {
    const int cls = label_sample(biased, rng);
    REQUIRE(cls >= 0);
    REQUIRE(cls < 2);
    zeros += cls == 0;
  }
  const double sigma = std::sqrt(30000.0 * 0.7 * 0.3);
  CHECK(static_cast<double>(zeros) > 21000.0 - 3.0 * sigma);
  CHECK(static_cast<double>(zeros) < 21000.0 + 3.0 * sigma);
}

TEST_CASE("average_probs takes the elementwise mean of member outputs") {
  std::vector<Matrix> members = {Matrix::from_rows({{0.6, 0.4}}),
                                 Matrix::from_rows({{0.6, 0.4}}),
                                 Matrix::from_rows({{0.9, 0.1}})};
  Matrix mean = average_probs(members);
  REQUIRE(mean.rows() == 1);
  REQUIRE(mean.cols() == 2);
  CHECK(mean(0, 0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(mean(0, 1) == doctest::Approx(0.3).epsilon(1e-12));
  // A single member averages to itself exactly.
  Matrix solo = average_probs({Matrix::from_rows({{0.25, 0.75}})});
  CHECK(solo(0, 0) == 0.25);
  CHECK(solo(0, 1) == 0.75);
}

TEST_CASE("average_probs validates its inputs") {
  CHECK_THROWS_AS(average_probs({}), DegenerateDataError);
  std::vector<Matrix> mismatched = {Matrix::from_rows({{0.5, 0.5}}),
                                    Matrix::from_rows({{0.5, 0.25, 0.25}})};
  CHECK_THROWS_AS(average_probs(mismatched), ShapeMismatchError);
}
