#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "sll/errors.hpp"
#include "sll/metrics.hpp"

using namespace sll;

TEST_CASE("tvd evaluates half the L1 distance") {
  CHECK(tvd(ClassDistribution({0.75, 0.25}), ClassDistribution({0.5, 0.5})) == 0.25);
  CHECK(tvd(ClassDistribution({1.0, 0.0}), ClassDistribution({0.0, 1.0})) == 1.0);
  CHECK(tvd(ClassDistribution({0.3, 0.7}), ClassDistribution({0.3, 0.7})) == 0.0);
  CHECK_THROWS_AS(tvd(ClassDistribution({0.5, 0.5}), ClassDistribution({0.4, 0.3, 0.3})),
                  ShapeMismatchError);
}

TEST_CASE("tvd satisfies the metric axioms on random triples") {
  Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + rng.below(4);
    ClassDistribution a = test::random_distribution(rng, k);
    ClassDistribution b = test::random_distribution(rng, k);
    ClassDistribution c = test::random_distribution(rng, k);
    const double ab = tvd(a, b);
    const double ba = tvd(b, a);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(ab == ba);
    CHECK(tvd(a, a) == 0.0);
    CHECK(ab <= tvd(a, c) + tvd(c, b) + 1e-12);
  }
}

TEST_CASE("mean_tvd averages per-instance distances and is zero at equality") {
  Matrix preds = Matrix::from_rows({{0.75, 0.25}, {0.5, 0.5}});
  std::vector<ClassDistribution> targets = {ClassDistribution({0.5, 0.5}),
                                            ClassDistribution({0.5, 0.5})};
  CHECK(mean_tvd(preds, targets) == 0.125);

  std::vector<ClassDistribution> same = {ClassDistribution({0.75, 0.25}),
                                         ClassDistribution({0.5, 0.5})};
  CHECK(mean_tvd(preds, same) == 0.0);
}

TEST_CASE("auc_binary reproduces the rank statistic") {
  CHECK(auc_binary({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}) == 0.75);
  CHECK(auc_binary({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}) == 1.0);
  CHECK(auc_binary({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1}) == 0.0);
  CHECK(auc_binary({0.5, 0.5, 0.5, 0.5}, {0, 0, 1, 1}) == 0.5);
  // One tie across the class boundary counts half.
  CHECK(auc_binary({0.5, 0.5}, {0, 1}) == 0.5);
  CHECK(auc_binary({0.3, 0.5, 0.5}, {0, 0, 1}) == 0.75);
}

TEST_CASE("auc_binary validates labels") {
  CHECK_THROWS_AS(auc_binary({0.1, 0.2}, {0, 2}), OutOfRangeError);
  CHECK_THROWS_AS(auc_binary({0.1, 0.2}, {1, 1}), SingleClassError);
}

TEST_CASE("auc matches a brute-force pair count with ties") {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.below(40);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    bool has_both = false;
    for (std::size_t i = 0; i < n; ++i) {
      // Quantized scores force tie handling to matter.
      scores[i] = rng.below(8) / 8.0;
      labels[i] = rng.uniform() < 0.4 ? 1 : 0;
    }
    labels[0] = 0;
    labels[1] = 1;
    has_both = true;
    REQUIRE(has_both);

    double pairs = 0.0;
    double wins = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] != 1) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[j] != 0) continue;
        pairs += 1.0;
        if (scores[i] > scores[j]) wins += 1.0;
        if (scores[i] == scores[j]) wins += 0.5;
      }
    }
    CHECK(auc_binary(scores, labels) == wins / pairs);
  }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
  Rng rng(23);
  std::vector<double> scores(50);
  std::vector<int> labels(50);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.uniform();
    labels[i] = rng.uniform() < 0.5 ? 1 : 0;
  }
  labels[0] = 0;
  labels[1] = 1;
  std::vector<double> transformed(scores.size());
  std::transform(scores.begin(), scores.end(), transformed.begin(),
                 [](double s) { return std::exp(3.0 * s) + s; });
  CHECK(auc_binary(scores, labels) == auc_binary(transformed, labels));

  std::vector<double> reversed(scores.size());
  std::transform(scores.begin(), scores.end(), reversed.begin(), [](double s) { return -s; });
  CHECK(auc_binary(reversed, labels) == doctest::Approx(1.0 - auc_binary(scores, labels)));
}

TEST_CASE("multi-class auc macro-averages one-vs-rest over present classes") {
  // Three classes, three instances each; hand-computable OvR values.
  Matrix scores = Matrix::from_rows({{0.8, 0.1, 0.1},
                                     {0.6, 0.3, 0.1},
                                     {0.2, 0.7, 0.1},
                                     {0.3, 0.5, 0.2},
                                     {0.1, 0.2, 0.7},
                                     {0.2, 0.2, 0.6}});
  std::vector<int> labels = {0, 0, 1, 1, 2, 2};
  double class0 = auc_binary({0.8, 0.6, 0.2, 0.3, 0.1, 0.2}, {1, 1, 0, 0, 0, 0});
  double class1 = auc_binary({0.1, 0.3, 0.7, 0.5, 0.2, 0.2}, {0, 0, 1, 1, 0, 0});
  double class2 = auc_binary({0.1, 0.1, 0.1, 0.2, 0.7, 0.6}, {0, 0, 0, 0, 1, 1});
  CHECK(auc(scores, labels) == doctest::Approx((class0 + class1 + class2) / 3.0).epsilon(1e-12));
}

TEST_CASE("multi-class auc skips absent classes and needs two present") {
  Matrix scores = Matrix::from_rows(
      {{0.8, 0.1, 0.1}, {0.3, 0.2, 0.5}, {0.3, 0.1, 0.6}, {0.2, 0.1, 0.7}});
  // Class 1 never appears: the result averages the OvR AUCs of classes 0 and 2.
  std::vector<int> labels = {0, 0, 2, 2};
  double class0 = auc_binary({0.8, 0.3, 0.3, 0.2}, {1, 1, 0, 0});
  double class2 = auc_binary({0.1, 0.5, 0.6, 0.7}, {0, 0, 1, 1});
  CHECK(auc(scores, labels) == doctest::Approx((class0 + class2) / 2.0).epsilon(1e-12));

  std::vector<int> single = {0, 0, 0, 0};
  CHECK_THROWS_AS(auc(scores, single), SingleClassError);
}
