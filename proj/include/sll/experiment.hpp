#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sll/core.hpp"

namespace sll {

/// Full description of one experiment run over a single train fraction.
struct ExperimentConfig {
  std::string dataset;             // training CSV (soft or hard labels)
  std::string gt_dataset;          // optional hard CSV with aligned clean labels
  std::string dataset_name;       // result-row identifier (default: dataset path stem)
  std::string gt_model = "none";  // provenance annotation for result rows
  std::string uncertainty = "none";
  std::string noise_model = "none";  // none, ncar, nar or a miscalibration name
  std::vector<int> noise_levels = {0};
  std::vector<std::string> methods;  // default: the full 19-method registry
  std::vector<std::string> bases;    // default: GNB, LR, SGDHuber, DT
  double train_fraction = 0.7;
  std::size_t repeats = 25;
  std::size_t ensemble_size = 50;
  double threshold_percentile = 0.1;
  std::uint64_t seed = 0;
  std::string output;      // result CSV path; empty = do not write
  unsigned parallelism = 0;  // 0 = SLL_PARALLELISM env or hardware default

  void validate() const;
};

/// One metric observation. `failed` cells keep the run going and serialize
/// their value as NA.
struct ResultRow {
  std::string dataset;
  std::string gt_model;
  std::string uncertainty;
  std::string noise_model;
  int noise_level = 0;
  std::string method;
  std::string base;
  std::size_t repeat = 0;
  std::string metric;
  double value = 0.0;
  bool failed = false;
};

/// Runs the split/corrupt/fit/evaluate protocol for every requested
/// (noise level x repeat x method x base) cell and returns the rows sorted
/// by all key fields. Train labels are corrupted, test labels never are.
/// With a gt_dataset the metrics are auc_gt and mean_tvd_pg (clean hard and
/// soft targets); without one they are auc_observed and mean_tvd_observed
/// (targets derived from the observed labels). Writes cfg.output when set.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);

}  // namespace sll
