#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sll/dataset_io.hpp"
#include "sll/datagen.hpp"
#include "sll/errors.hpp"
#include "sll/experiment.hpp"
#include "sll/noise.hpp"
#include "sll/rng.hpp"
#include "sll/simulate.hpp"

namespace {

using nlohmann::ordered_json;

std::string path_stem(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  const std::size_t start = slash == std::string::npos ? 0 : slash + 1;
  const std::size_t dot = path.find_last_of('.');
  const std::size_t end = (dot == std::string::npos || dot <= start) ? path.size() : dot;
  return path.substr(start, end - start);
}

std::string with_fraction_suffix(const std::string& path, double fraction) {
  const std::size_t dot = path.find_last_of('.');
  const std::string suffix = "_frac" + sll::format_double(fraction);
  if (dot == std::string::npos || path.find('/', dot) != std::string::npos) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

int run_simulate(const std::string& out, double d, std::size_t dims,
                 const std::vector<double>& priors, const std::vector<std::size_t>& sizes,
                 std::size_t repeats, double sigma, std::uint64_t seed) {
  std::ofstream file(out);
  if (!file) throw sll::ParseError("cannot write '" + out + "'");
  file << "prior,sample_size,delta_mse,stderr,repeats\n";
  for (std::size_t p = 0; p < priors.size(); ++p) {
    sll::GaussianSimConfig cfg;
    cfg.d = d;
    cfg.dims = dims;
    cfg.prior1 = priors[p];
    cfg.sample_sizes = sizes;
    cfg.repeats = repeats;
    cfg.noise_sigma = sigma;
    const auto curve = sll::run_delta_mse(cfg, sll::derive_seed(seed, {p}));
    for (const auto& point : curve) {
      file << sll::format_double(priors[p]) << ',' << point.sample_size << ','
           << sll::format_double(point.delta_mse) << ','
           << sll::format_double(point.stderr_value) << ',' << point.repeats << '\n';
    }
  }
  return 0;
}

int run_generate(const std::string& input, const std::string& model_name, std::size_t resamples,
                 std::uint64_t seed, const std::string& outdir) {
  const sll::HardDataset raw = sll::load_hard_dataset(input);
  const sll::GroundTruthModel kind = sll::parse_ground_truth_model(model_name);
  const sll::GroundTruth gt = sll::build_ground_truth(raw, kind, sll::derive_seed(seed, {0}));
  const auto [low, high] =
      sll::select_uncertainty_levels(gt, resamples, sll::derive_seed(seed, {1}));

  const std::string stem = outdir + "/" + path_stem(input);
  const std::string gt_path = stem + "_g.csv";
  const std::string low_path = stem + "_pg_low.csv";
  const std::string high_path = stem + "_pg_high.csv";
  sll::write_hard_csv(gt_path, gt.dataset);
  sll::write_soft_csv(low_path, low.dataset);
  sll::write_soft_csv(high_path, high.dataset);

  auto describe = [](const sll::PartialGroundTruth& pgt, const std::string& file) {
    ordered_json j;
    j["file"] = file;
    j["hidden_features"] = pgt.hidden;
    j["visible_features"] = pgt.visible;
    j["achieved_mean_tvd"] = pgt.achieved_tvd;
    return j;
  };
  ordered_json manifest;
  manifest["input"] = input;
  manifest["ground_truth_model"] = model_name;
  manifest["resamples"] = resamples;
  manifest["seed"] = seed;
  manifest["ground_truth_file"] = gt_path;
  manifest["low_uncertainty"] = describe(low, low_path);
  manifest["high_uncertainty"] = describe(high, high_path);
  std::ofstream mf(stem + "_manifest.json");
  if (!mf) throw sll::ParseError("cannot write '" + stem + "_manifest.json'");
  mf << manifest.dump(2) << '\n';
  return 0;
}

int run_corrupt(const std::string& input, const std::string& model_name, double beta,
                std::uint64_t seed, const std::string& out) {
  const sll::SoftDataset data = sll::load_soft_dataset(input);
  const sll::NoiseModel model = sll::parse_noise_model(model_name);
  sll::write_soft_csv(out, sll::corrupt_dataset(data, model, beta, seed));
  return 0;
}

int run_convert(const std::string& input, const std::string& out) {
  sll::write_soft_csv(out, sll::convert_confidence(sll::load_confidence_csv(input)));
  return 0;
}

void load_config_file(const std::string& path, sll::ExperimentConfig& cfg,
                      std::vector<double>& fractions) {
  std::ifstream in(path);
  if (!in) throw sll::ParseError("cannot open config '" + path + "'");
  ordered_json j;
  in >> j;
  if (j.contains("dataset")) cfg.dataset = j["dataset"].get<std::string>();
  if (j.contains("gt_dataset")) cfg.gt_dataset = j["gt_dataset"].get<std::string>();
  if (j.contains("dataset_name")) cfg.dataset_name = j["dataset_name"].get<std::string>();
  if (j.contains("gt_model")) cfg.gt_model = j["gt_model"].get<std::string>();
  if (j.contains("uncertainty")) cfg.uncertainty = j["uncertainty"].get<std::string>();
  if (j.contains("noise_model")) cfg.noise_model = j["noise_model"].get<std::string>();
  if (j.contains("noise_levels")) cfg.noise_levels = j["noise_levels"].get<std::vector<int>>();
  if (j.contains("methods")) cfg.methods = j["methods"].get<std::vector<std::string>>();
  if (j.contains("bases")) cfg.bases = j["bases"].get<std::vector<std::string>>();
  if (j.contains("train_fraction")) cfg.train_fraction = j["train_fraction"].get<double>();
  if (j.contains("train_fractions")) fractions = j["train_fractions"].get<std::vector<double>>();
  if (j.contains("repeats")) cfg.repeats = j["repeats"].get<std::size_t>();
  if (j.contains("ensemble_size")) cfg.ensemble_size = j["ensemble_size"].get<std::size_t>();
  if (j.contains("threshold_percentile")) {
    cfg.threshold_percentile = j["threshold_percentile"].get<double>();
  }
  if (j.contains("output")) cfg.output = j["output"].get<std::string>();
  if (j.contains("parallelism")) cfg.parallelism = j["parallelism"].get<unsigned>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-label learning toolkit: simulation, data generation, label noise and "
               "wrapper-method experiments"};
  app.require_subcommand(1);

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate",
                                 "Two-Gaussian mean-estimation study (soft vs hard labels)");
  double sim_d = 0.5;
  std::size_t sim_dims = 2;
  std::vector<double> sim_priors = {0.5};
  std::vector<std::size_t> sim_sizes = {4, 10, 30, 100, 1000};
  std::size_t sim_repeats = 10000;
  double sim_sigma = 0.0;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  sim->add_option("--d", sim_d, "Distance parameter (class means at +-d per dimension)");
  sim->add_option("--dims", sim_dims, "Problem dimensionality");
  sim->add_option("--priors", sim_priors, "Class-1 priors to sweep")->expected(-1);
  sim->add_option("--sizes", sim_sizes, "Sample sizes to sweep")->expected(-1);
  sim->add_option("--repeats", sim_repeats, "Monte-Carlo repeats per grid point");
  sim->add_option("--sigma", sim_sigma, "Std dev of Gaussian soft-label noise (0 = noiseless)");
  sim->add_option("--seed", sim_seed, "Master RNG seed")->required();
  sim->add_option("--out", sim_out, "Output CSV path")->required();

  // --- generate ---
  auto* gen = app.add_subcommand("generate",
                                 "Derive ground-truth and partial-ground-truth datasets from a "
                                 "hard-labelled CSV via feature hiding");
  std::string gen_input;
  std::string gen_model = "bagged-DT";
  std::size_t gen_resamples = 1000;
  std::uint64_t gen_seed = 0;
  std::string gen_outdir = ".";
  gen->add_option("--input", gen_input, "Hard-labelled CSV (f_* columns + label)")->required();
  gen->add_option("--model", gen_model, "Ground-truth model: LR or bagged-DT");
  gen->add_option("--resamples", gen_resamples, "KDE redraws per instance");
  gen->add_option("--seed", gen_seed, "Master RNG seed")->required();
  gen->add_option("--outdir", gen_outdir, "Output directory");

  // --- corrupt ---
  auto* cor = app.add_subcommand("corrupt", "Apply a label-noise model to a soft-labelled CSV");
  std::string cor_input;
  std::string cor_model;
  double cor_beta = -1.0;
  int cor_level = -1;
  std::uint64_t cor_seed = 0;
  std::string cor_out;
  cor->add_option("--input", cor_input, "Soft-labelled CSV")->required();
  cor->add_option("--model", cor_model,
                  "Noise model: ncar, nar, overprediction, underprediction, overextremity, "
                  "underextremity")
      ->required();
  auto* beta_opt = cor->add_option("--beta", cor_beta, "Noise strength in [0, 0.3]");
  auto* level_opt =
      cor->add_option("--level", cor_level, "Noise level 0..6 (maps to beta = 0.05 * level)");
  beta_opt->excludes(level_opt);
  cor->add_option("--seed", cor_seed, "Master RNG seed")->required();
  cor->add_option("--out", cor_out, "Output CSV path")->required();

  // --- run ---
  auto* run = app.add_subcommand("run", "Run the wrapper-method comparison experiment");
  std::string run_config;
  sll::ExperimentConfig cfg;
  std::vector<double> run_fractions;
  std::uint64_t run_seed = 0;
  std::string flag_dataset, flag_gt_dataset, flag_name, flag_gt_model, flag_uncertainty;
  std::string flag_noise, flag_output;
  std::vector<int> flag_levels;
  std::vector<std::string> flag_methods, flag_bases;
  double flag_fraction = 0.7;
  std::vector<double> flag_fractions;
  std::size_t flag_repeats = 25;
  std::size_t flag_ensemble = 50;
  double flag_threshold = 0.1;
  unsigned flag_threads = 0;
  run->add_option("--config", run_config, "JSON config file (flags override its fields)");
  run->add_option("--dataset", flag_dataset, "Training CSV (soft or hard labels)");
  run->add_option("--gt-dataset", flag_gt_dataset,
                  "Hard CSV with row-aligned clean labels (enables auc_gt / mean_tvd_pg)");
  run->add_option("--name", flag_name, "Dataset name for the result rows");
  run->add_option("--gt-model", flag_gt_model, "Ground-truth model annotation");
  run->add_option("--uncertainty", flag_uncertainty, "Uncertainty-level annotation");
  run->add_option("--noise", flag_noise, "Noise model name or 'none'");
  run->add_option("--levels", flag_levels, "Noise levels 0..6")->expected(-1);
  run->add_option("--methods", flag_methods, "Method names (default: all 19)")->expected(-1);
  run->add_option("--bases", flag_bases, "Base classifiers (default: GNB LR SGDHuber DT)")
      ->expected(-1);
  run->add_option("--fraction", flag_fraction, "Train fraction in (0, 1)");
  run->add_option("--fractions", flag_fractions,
                  "Train-fraction sweep; writes one result CSV per fraction")
      ->expected(-1);
  run->add_option("--repeats", flag_repeats, "Random train/test splits per cell");
  run->add_option("--ensemble-size", flag_ensemble, "Members per ensemble method");
  run->add_option("--threshold", flag_threshold, "Threshold percentile for Threshold* methods");
  run->add_option("--threads", flag_threads,
                  "Worker threads (default: SLL_PARALLELISM env or hardware)");
  run->add_option("--out", flag_output, "Result CSV path");
  run->add_option("--seed", run_seed, "Master RNG seed (required: no silent nondeterminism)")
      ->required();

  // --- convert-confidence ---
  auto* conv = app.add_subcommand(
      "convert-confidence", "Turn label+confidence rows into binary soft labels (scale 5..10)");
  std::string conv_input;
  std::string conv_out;
  conv->add_option("--input", conv_input, "CSV with f_*, label and confidence columns")
      ->required();
  conv->add_option("--out", conv_out, "Output soft-labelled CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return run_simulate(sim_out, sim_d, sim_dims, sim_priors, sim_sizes, sim_repeats, sim_sigma,
                          sim_seed);
    }
    if (gen->parsed()) {
      return run_generate(gen_input, gen_model, gen_resamples, gen_seed, gen_outdir);
    }
    if (cor->parsed()) {
      double beta = cor_beta;
      if (cor_level >= 0) beta = sll::noise_level_to_beta(cor_level);
      if (beta < 0.0) {
        std::cerr << "corrupt: either --beta or --level is required\n";
        return 1;
      }
      return run_corrupt(cor_input, cor_model, beta, cor_seed, cor_out);
    }
    if (conv->parsed()) {
      return run_convert(conv_input, conv_out);
    }
    if (run->parsed()) {
      if (!run_config.empty()) load_config_file(run_config, cfg, run_fractions);
      if (run->count("--dataset")) cfg.dataset = flag_dataset;
      if (run->count("--gt-dataset")) cfg.gt_dataset = flag_gt_dataset;
      if (run->count("--name")) cfg.dataset_name = flag_name;
      if (run->count("--gt-model")) cfg.gt_model = flag_gt_model;
      if (run->count("--uncertainty")) cfg.uncertainty = flag_uncertainty;
      if (run->count("--noise")) cfg.noise_model = flag_noise;
      if (run->count("--levels")) cfg.noise_levels = flag_levels;
      if (run->count("--methods")) cfg.methods = flag_methods;
      if (run->count("--bases")) cfg.bases = flag_bases;
      if (run->count("--fraction")) cfg.train_fraction = flag_fraction;
      if (run->count("--fractions")) run_fractions = flag_fractions;
      if (run->count("--repeats")) cfg.repeats = flag_repeats;
      if (run->count("--ensemble-size")) cfg.ensemble_size = flag_ensemble;
      if (run->count("--threshold")) cfg.threshold_percentile = flag_threshold;
      if (run->count("--threads")) cfg.parallelism = flag_threads;
      if (run->count("--out")) cfg.output = flag_output;
      cfg.seed = run_seed;

      if (run_fractions.empty()) {
        sll::run_experiment(cfg);
        return 0;
      }
      // Sweep: the fixed result schema has no fraction column, so each
      // fraction writes its own conforming file.
      for (double fraction : run_fractions) {
        sll::ExperimentConfig sweep = cfg;
        sweep.train_fraction = fraction;
        if (!cfg.output.empty()) sweep.output = with_fraction_suffix(cfg.output, fraction);
        sll::run_experiment(sweep);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
