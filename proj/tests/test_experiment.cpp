#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "sll/dataset_io.hpp"
#include "sll/errors.hpp"
#include "sll/experiment.hpp"

using namespace sll;

namespace {

std::string scratch_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sll_experiment_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

// A soft-labelled CSV with two informative features, plus an aligned
// clean-label CSV; reused across cases.
struct Fixture {
  std::string soft_path;
  std::string gt_path;
  std::size_t size = 0;
};

Fixture make_fixture(const std::string& tag, std::size_t n) {
  Rng rng(1234);
  Matrix features(n, 2, 0.0);
  std::vector<ClassDistribution> labels;
  std::vector<int> hard(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = i % 2;
    hard[i] = cls;
    features(i, 0) = rng.normal(cls == 0 ? 0.0 : 3.0, 1.0);
    features(i, 1) = rng.normal(cls == 0 ? 0.0 : 3.0, 1.0);
    const double confident = 0.7 + 0.25 * rng.uniform();
    labels.push_back(cls == 0 ? ClassDistribution({confident, 1.0 - confident})
                              : ClassDistribution({1.0 - confident, confident}));
  }
  Fixture fx;
  fx.soft_path = scratch_path(tag + "_soft.csv");
  fx.gt_path = scratch_path(tag + "_gt.csv");
  fx.size = n;
  write_soft_csv(fx.soft_path, SoftDataset(features, labels));
  write_hard_csv(fx.gt_path, HardDataset(std::move(features), std::move(hard), 2));
  return fx;
}

using RowKey = std::tuple<std::string, std::string, std::string, std::string, int, std::string,
                          std::string, std::size_t, std::string>;

RowKey key_of(const ResultRow& r) {
  return {r.dataset, r.gt_model, r.uncertainty, r.noise_model, r.noise_level,
          r.method,  r.base,     r.repeat,      r.metric};
}

}  // namespace

TEST_CASE("a single cell produces exactly one row per metric") {
  Fixture fx = make_fixture("single", 20);
  ExperimentConfig cfg;
  cfg.dataset = fx.soft_path;
  cfg.methods = {"SampleClf"};
  cfg.bases = {"GNB"};
  cfg.repeats = 1;
  cfg.seed = 5;
  std::vector<ResultRow> rows = run_experiment(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].metric == "auc_observed");
  CHECK(rows[1].metric == "mean_tvd_observed");
  for (const ResultRow& row : rows) {
    CHECK(row.dataset == "single_soft");
    CHECK(row.gt_model == "none");
    CHECK(row.uncertainty == "none");
    CHECK(row.noise_model == "none");
    CHECK(row.noise_level == 0);
    CHECK(row.method == "SampleClf");
    CHECK(row.base == "GNB");
    CHECK(row.repeat == 0);
    CHECK_FALSE(row.failed);
    CHECK(row.value >= 0.0);
    CHECK(row.value <= 1.0);
  }
}

TEST_CASE("every requested cell appears exactly once, in sorted order") {
  Fixture fx = make_fixture("coverage", 20);
  ExperimentConfig cfg;
  cfg.dataset = fx.soft_path;
  cfg.noise_model = "ncar";
  cfg.noise_levels = {0, 2};
  cfg.methods = {"PluralityClf", "SampleClf"};
  cfg.bases = {"GNB", "DT"};
  cfg.repeats = 3;
  cfg.seed = 8;
  std::vector<ResultRow> rows = run_experiment(cfg);
  REQUIRE(rows.size() == 2 * 3 * 2 * 2 * 2);

  std::set<RowKey> seen;
  for (const ResultRow& row : rows) CHECK(seen.insert(key_of(row)).second);
  for (int level : {0, 2}) {
    for (std::size_t repeat = 0; repeat < 3; ++repeat) {
      for (const std::string& method : {"PluralityClf", "SampleClf"}) {
        for (const std::string& base : {"GNB", "DT"}) {
          for (const std::string& metric : {"auc_observed", "mean_tvd_observed"}) {
            CHECK(seen.count({"coverage_soft", "none", "none", "ncar", level, method, base,
                              repeat, metric}) == 1);
          }
        }
      }
    }
  }
  CHECK(std::is_sorted(rows.begin(), rows.end(),
                       [](const ResultRow& a, const ResultRow& b) { return key_of(a) < key_of(b); }));
}

TEST_CASE("experiments repeat bitwise under the same seed and move under a new one") {
  Fixture fx = make_fixture("determinism", 20);
  ExperimentConfig cfg;
  cfg.dataset = fx.soft_path;
  cfg.methods = {"BootstrapSamplingClf"};
  cfg.bases = {"DT"};
  cfg.repeats = 2;
  cfg.ensemble_size = 3;
  cfg.seed = 77;
  std::vector<ResultRow> a = run_experiment(cfg);
  std::vector<ResultRow> b = run_experiment(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(key_of(a[i]) == key_of(b[i]));
    CHECK(a[i].value == b[i].value);
    CHECK(a[i].failed == b[i].failed);
  }
  cfg.seed = 78;
  std::vector<ResultRow> c = run_experiment(cfg);
  bool any_different = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    any_different = any_different || a[i].value != c[i].value;
  }
  CHECK(any_different);
}

TEST_CASE("noise level zero reproduces the noise-free values exactly") {
  Fixture fx = make_fixture("levelzero", 20);
  ExperimentConfig noisy;
  noisy.dataset = fx.soft_path;
  noisy.noise_model = "ncar";
  noisy.noise_levels = {0};
  noisy.methods = {"SampleClf", "DuplicateWeightsClf"};
  noisy.bases = {"GNB", "LR"};
  noisy.repeats = 2;
  noisy.seed = 21;
  ExperimentConfig clean = noisy;
  clean.noise_model = "none";
  std::vector<ResultRow> with_level = run_experiment(noisy);
  std::vector<ResultRow> without = run_experiment(clean);
  REQUIRE(with_level.size() == without.size());
  // Rows sort identically apart from the noise-model tag.
  for (std::size_t i = 0; i < with_level.size(); ++i) {
    CHECK(with_level[i].noise_model == "ncar");
    CHECK(without[i].noise_model == "none");
    CHECK(with_level[i].method == without[i].method);
    CHECK(with_level[i].base == without[i].base);
    CHECK(with_level[i].repeat == without[i].repeat);
    CHECK(with_level[i].metric == without[i].metric);
    CHECK(with_level[i].value == without[i].value);
  }
}

TEST_CASE("a failing cell yields NA rows and does not stop the run") {
  // Constant features break the Gaussian model on every split; the linear
  // model is indifferent to them.
  const std::string path = scratch_path("degenerate_soft.csv");
  {
    std::ofstream out(path);
    out << "f_0,p_0,p_1\n";
    for (int i = 0; i < 12; ++i) out << "1.5," << (i % 2 == 0 ? "0.9,0.1" : "0.2,0.8") << "\n";
  }
  ExperimentConfig cfg;
  cfg.dataset = path;
  cfg.methods = {"SampleClf"};
  cfg.bases = {"GNB", "LR"};
  cfg.repeats = 1;
  cfg.seed = 3;
  cfg.output = scratch_path("degenerate_results.csv");
  std::vector<ResultRow> rows = run_experiment(cfg);
  REQUIRE(rows.size() == 4);
  for (const ResultRow& row : rows) {
    if (row.base == "GNB") {
      CHECK(row.failed);
    } else {
      CHECK_FALSE(row.failed);
    }
  }
  // Failed values serialize as NA.
  std::ifstream in(cfg.output);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "dataset,gt_model,uncertainty,noise_model,noise_level,method,base,repeat,metric,value");
  bool saw_na = false;
  bool saw_value = false;
  while (std::getline(in, line)) {
    if (line.find(",GNB,") != std::string::npos) {
      CHECK(line.substr(line.size() - 3) == ",NA");
      saw_na = true;
    }
    if (line.find(",LR,") != std::string::npos) {
      CHECK(line.substr(line.size() - 3) != ",NA");
      saw_value = true;
    }
  }
  CHECK(saw_na);
  CHECK(saw_value);
}

TEST_CASE("a clean-label dataset switches the metrics to ground-truth targets") {
  Fixture fx = make_fixture("synthetic", 20);
  ExperimentConfig cfg;
  cfg.dataset = fx.soft_path;
  cfg.gt_dataset = fx.gt_path;
  cfg.gt_model = "LR";
  cfg.uncertainty = "high";
  cfg.methods = {"SampleClf"};
  cfg.bases = {"GNB"};
  cfg.repeats = 1;
  cfg.seed = 13;
  std::vector<ResultRow> rows = run_experiment(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].metric == "auc_gt");
  CHECK(rows[1].metric == "mean_tvd_pg");
  CHECK(rows[0].gt_model == "LR");
  CHECK(rows[0].uncertainty == "high");

  // Row-count disagreement between the two files is a schema error.
  Fixture small = make_fixture("mismatch", 10);
  cfg.gt_dataset = small.gt_path;
  CHECK_THROWS_AS(run_experiment(cfg), ShapeMismatchError);
}

TEST_CASE("the dataset name column can be overridden") {
  Fixture fx = make_fixture("naming", 16);
  ExperimentConfig cfg;
  cfg.dataset = fx.soft_path;
  cfg.dataset_name = "custom-name";
  cfg.methods = {"SampleClf"};
  cfg.bases = {"GNB"};
  cfg.repeats = 1;
  cfg.seed = 1;
  std::vector<ResultRow> rows = run_experiment(cfg);
  for (const ResultRow& row : rows) CHECK(row.dataset == "custom-name");
}

TEST_CASE("experiment configurations are validated") {
  Fixture fx = make_fixture("validate", 16);
  ExperimentConfig ok;
  ok.dataset = fx.soft_path;
  CHECK_NOTHROW(ok.validate());

  ExperimentConfig bad = ok;
  bad.dataset = "";
  CHECK_THROWS_AS(bad.validate(), SchemaError);
  bad = ok;
  bad.train_fraction = 0.0;
  CHECK_THROWS_AS(bad.validate(), OutOfRangeError);
  bad = ok;
  bad.train_fraction = 1.0;
  CHECK_THROWS_AS(bad.validate(), OutOfRangeError);
  bad = ok;
  bad.repeats = 0;
  CHECK_THROWS_AS(bad.validate(), OutOfRangeError);
  bad = ok;
  bad.ensemble_size = 0;
  CHECK_THROWS_AS(bad.validate(), OutOfRangeError);
  bad = ok;
  bad.threshold_percentile = 1.0;
  CHECK_THROWS_AS(bad.validate(), OutOfRangeError);
  bad = ok;
  bad.noise_levels = {};
  CHECK_THROWS_AS(bad.validate(), OutOfRangeError);
  bad = ok;
  bad.noise_levels = {7};
  CHECK_THROWS_AS(bad.validate(), OutOfRangeError);
  bad = ok;
  bad.noise_model = "bogus";
  CHECK_THROWS_AS(bad.validate(), SchemaError);
}
