#include "sll/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <tuple>

#include "sll/classifiers.hpp"
#include "sll/dataset_io.hpp"
#include "sll/errors.hpp"
#include "sll/methods.hpp"
#include "sll/metrics.hpp"
#include "sll/noise.hpp"
#include "sll/parallel.hpp"
#include "sll/rng.hpp"
#include "sll/techniques.hpp"

namespace sll {

namespace {

// Tags keeping the split / corruption / fit substreams of one master seed
// disjoint.
enum SeedTag : std::uint64_t { kSplitTag = 0xA1, kNoiseTag = 0xB2, kFitTag = 0xC3 };

std::string path_stem(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  const std::size_t start = slash == std::string::npos ? 0 : slash + 1;
  const std::size_t dot = path.find_last_of('.');
  const std::size_t end = (dot == std::string::npos || dot <= start) ? path.size() : dot;
  return path.substr(start, end - start);
}

struct PreparedData {
  SoftDataset soft;            // training view (one-hot encoded when the input was hard)
  std::vector<int> hard_targets;  // AUC targets: clean gt labels or plurality of soft
  bool synthetic = false;         // true when a gt_dataset supplied the targets
};

PreparedData prepare_data(const ExperimentConfig& cfg) {
  PreparedData prepared;
  auto loaded = load_dataset(cfg.dataset);
  if (auto* hard = std::get_if<HardDataset>(&loaded)) {
    std::vector<ClassDistribution> labels;
    labels.reserve(hard->size());
    for (int label : hard->labels) labels.push_back(one_hot(label, hard->class_count));
    prepared.soft = SoftDataset(std::move(hard->features), std::move(labels));
  } else {
    prepared.soft = std::move(std::get<SoftDataset>(loaded));
  }

  if (!cfg.gt_dataset.empty()) {
    HardDataset gt = load_hard_dataset(cfg.gt_dataset);
    if (gt.size() != prepared.soft.size()) {
      throw ShapeMismatchError("ground-truth dataset has " + std::to_string(gt.size()) +
                               " rows but the training dataset has " +
                               std::to_string(prepared.soft.size()));
    }
    if (gt.class_count > prepared.soft.class_count) {
      throw ShapeMismatchError("ground-truth labels use more classes than the soft labels");
    }
    prepared.hard_targets = std::move(gt.labels);
    prepared.synthetic = true;
  } else {
    prepared.hard_targets.resize(prepared.soft.size());
    for (std::size_t i = 0; i < prepared.soft.size(); ++i) {
      prepared.hard_targets[i] = plurality_vote(prepared.soft.labels[i]).cls;
    }
    prepared.synthetic = false;
  }
  return prepared;
}

std::optional<NoiseModel> parse_optional_noise(const std::string& name) {
  if (name == "none" || name.empty()) return std::nullopt;
  return parse_noise_model(name);
}

bool row_key_less(const ResultRow& a, const ResultRow& b) {
  return std::tie(a.dataset, a.gt_model, a.uncertainty, a.noise_model, a.noise_level, a.method,
                  a.base, a.repeat, a.metric) <
         std::tie(b.dataset, b.gt_model, b.uncertainty, b.noise_model, b.noise_level, b.method,
                  b.base, b.repeat, b.metric);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dataset.empty()) throw SchemaError("no dataset path configured");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw OutOfRangeError("train fraction must lie in (0, 1), got " +
                          std::to_string(train_fraction));
  }
  if (repeats < 1) throw OutOfRangeError("repeats must be at least 1");
  if (ensemble_size < 1) throw OutOfRangeError("ensemble size must be at least 1");
  if (!(threshold_percentile >= 0.0 && threshold_percentile < 1.0)) {
    throw OutOfRangeError("threshold percentile must lie in [0, 1)");
  }
  if (noise_levels.empty()) throw OutOfRangeError("no noise levels requested");
  for (int level : noise_levels) {
    if (level < 0 || level > 6) {
      throw OutOfRangeError("noise levels must lie in 0..6, got " + std::to_string(level));
    }
  }
  parse_optional_noise(noise_model);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const PreparedData prepared = prepare_data(cfg);
  const SoftDataset& all = prepared.soft;
  const std::size_t n = all.size();
  if (n < 4) throw DegenerateDataError("the experiment needs at least 4 instances");

  const std::optional<NoiseModel> noise = parse_optional_noise(cfg.noise_model);
  const std::vector<int> levels = noise.has_value() ? cfg.noise_levels : std::vector<int>{0};
  const std::vector<std::string> method_list =
      cfg.methods.empty() ? method_names() : cfg.methods;
  const std::vector<std::string> base_list =
      cfg.bases.empty() ? base_classifier_names() : cfg.bases;
  const std::string dataset_name =
      cfg.dataset_name.empty() ? path_stem(cfg.dataset) : cfg.dataset_name;
  const std::string noise_name = noise.has_value() ? cfg.noise_model : "none";
  const std::string auc_metric = prepared.synthetic ? "auc_gt" : "auc_observed";
  const std::string tvd_metric = prepared.synthetic ? "mean_tvd_pg" : "mean_tvd_observed";

  // Resolve method specs once, with config-level ensemble size and threshold.
  std::vector<MethodSpec> specs;
  specs.reserve(method_list.size());
  for (const std::string& name : method_list) {
    MethodSpec spec = method_spec(name);
    if (spec.ensemble_size > 1) spec.ensemble_size = cfg.ensemble_size;
    spec.threshold_rule = ThresholdRule::percentile(cfg.threshold_percentile);
    specs.push_back(std::move(spec));
  }

  auto train_count = static_cast<std::size_t>(
      std::llround(cfg.train_fraction * static_cast<double>(n)));
  train_count = std::clamp<std::size_t>(train_count, 2, n - 2);

  // One work block per (level, repeat): the split is shared across levels
  // (keyed by repeat only) so level curves are paired, and the corruption is
  // re-drawn per level.
  struct Block {
    std::size_t level_index;
    std::size_t repeat;
  };
  std::vector<Block> blocks;
  blocks.reserve(levels.size() * cfg.repeats);
  for (std::size_t l = 0; l < levels.size(); ++l) {
    for (std::size_t r = 0; r < cfg.repeats; ++r) blocks.push_back({l, r});
  }

  std::vector<std::vector<ResultRow>> block_rows(blocks.size());
  parallel_for(
      blocks.size(),
      [&](std::size_t b) {
        const int level = levels[blocks[b].level_index];
        const std::size_t repeat = blocks[b].repeat;

        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        Rng split_rng(derive_seed(cfg.seed, {kSplitTag, repeat}));
        split_rng.shuffle(perm);
        const std::vector<std::size_t> train_idx(perm.begin(),
                                                 perm.begin() +
                                                     static_cast<std::ptrdiff_t>(train_count));
        const std::vector<std::size_t> test_idx(
            perm.begin() + static_cast<std::ptrdiff_t>(train_count), perm.end());

        std::vector<ClassDistribution> train_labels;
        train_labels.reserve(train_idx.size());
        for (std::size_t i : train_idx) train_labels.push_back(all.labels[i]);
        SoftDataset train(all.features.select_rows(train_idx), std::move(train_labels));

        if (noise.has_value()) {
          train = corrupt_dataset(
              train, *noise, noise_level_to_beta(level),
              derive_seed(cfg.seed, {kNoiseTag, static_cast<std::uint64_t>(level), repeat}));
        }

        const Matrix test_features = all.features.select_rows(test_idx);
        std::vector<ClassDistribution> test_soft;
        std::vector<int> test_hard;
        test_soft.reserve(test_idx.size());
        test_hard.reserve(test_idx.size());
        for (std::size_t i : test_idx) {
          test_soft.push_back(all.labels[i]);
          test_hard.push_back(prepared.hard_targets[i]);
        }

        auto& rows = block_rows[b];
        for (std::size_t mi = 0; mi < specs.size(); ++mi) {
          for (std::size_t bi = 0; bi < base_list.size(); ++bi) {
            ResultRow proto;
            proto.dataset = dataset_name;
            proto.gt_model = cfg.gt_model;
            proto.uncertainty = cfg.uncertainty;
            proto.noise_model = noise_name;
            proto.noise_level = level;
            proto.method = specs[mi].name;
            proto.base = base_list[bi];
            proto.repeat = repeat;

            const std::uint64_t fit_seed = derive_seed(
                cfg.seed, {kFitTag, static_cast<std::uint64_t>(level), repeat, mi, bi});

            std::optional<Matrix> probs;
            try {
              const auto base = make_base_classifier(base_list[bi]);
              const FittedMethod fitted = fit_method(specs[mi], *base, train, fit_seed);
              probs = fitted.predict_proba(test_features);
            } catch (const Error&) {
              probs.reset();
            }

            ResultRow auc_row = proto;
            auc_row.metric = auc_metric;
            ResultRow tvd_row = proto;
            tvd_row.metric = tvd_metric;
            if (!probs.has_value()) {
              auc_row.failed = true;
              tvd_row.failed = true;
            } else {
              try {
                auc_row.value = auc(*probs, test_hard);
              } catch (const Error&) {
                auc_row.failed = true;
              }
              try {
                tvd_row.value = mean_tvd(*probs, test_soft);
              } catch (const Error&) {
                tvd_row.failed = true;
              }
            }
            rows.push_back(std::move(auc_row));
            rows.push_back(std::move(tvd_row));
          }
        }
      },
      cfg.parallelism);

  std::vector<ResultRow> rows;
  for (auto& block : block_rows) {
    for (auto& row : block) rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), row_key_less);

  if (!cfg.output.empty()) write_results_csv(cfg.output, rows);
  return rows;
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "dataset,gt_model,uncertainty,noise_model,noise_level,method,base,repeat,metric,value\n";
  for (const ResultRow& row : rows) {
    out << row.dataset << ',' << row.gt_model << ',' << row.uncertainty << ',' << row.noise_model
        << ',' << row.noise_level << ',' << row.method << ',' << row.base << ',' << row.repeat
        << ',' << row.metric << ',' << (row.failed ? "NA" : format_double(row.value)) << '\n';
  }
}

}  // namespace sll
