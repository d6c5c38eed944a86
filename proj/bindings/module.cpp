#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "sll/classifiers.hpp"
#include "sll/core.hpp"
#include "sll/dataset_io.hpp"
#include "sll/metrics.hpp"
#include "sll/methods.hpp"
#include "sll/noise.hpp"
#include "sll/simulate.hpp"

namespace py = pybind11;

namespace {

using Rows = std::vector<std::vector<double>>;

sll::Matrix to_matrix(const Rows& rows) { return sll::Matrix::from_rows(rows); }

Rows to_rows(const sll::Matrix& m) {
  Rows out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    out[i].assign(row.begin(), row.end());
  }
  return out;
}

std::vector<sll::ClassDistribution> to_labels(const Rows& probs) {
  std::vector<sll::ClassDistribution> labels;
  labels.reserve(probs.size());
  for (const auto& row : probs) labels.emplace_back(row);
  return labels;
}

Rows from_labels(const std::vector<sll::ClassDistribution>& labels) {
  Rows out;
  out.reserve(labels.size());
  for (const auto& label : labels) out.push_back(label.probs());
  return out;
}

sll::FittedMethod fit_wrapper(const std::string& method, const std::string& base,
                              const Rows& features, const Rows& probs, std::uint64_t seed,
                              std::size_t ensemble_size, double threshold_percentile) {
  sll::MethodSpec spec = sll::method_spec(method);
  if (spec.ensemble_size > 1) spec.ensemble_size = ensemble_size;
  spec.threshold_rule = sll::ThresholdRule::percentile(threshold_percentile);
  const auto clf = sll::make_base_classifier(base);
  const sll::SoftDataset data(to_matrix(features), to_labels(probs));
  return sll::fit_method(spec, *clf, data, seed);
}

Rows corrupt_wrapper(const Rows& probs, const std::string& model, double beta,
                     std::uint64_t seed) {
  // Corruption never reads the features, so a zero column satisfies the
  // dataset shape checks without affecting the result.
  sll::Matrix dummy(probs.size(), 1);
  const sll::SoftDataset data(std::move(dummy), to_labels(probs));
  return from_labels(sll::corrupt_dataset(data, sll::parse_noise_model(model), beta, seed).labels);
}

py::list simulate_wrapper(double d, std::size_t dims, double prior1,
                          const std::vector<std::size_t>& sizes, std::size_t repeats, double sigma,
                          std::uint64_t seed) {
  sll::GaussianSimConfig cfg;
  cfg.d = d;
  cfg.dims = dims;
  cfg.prior1 = prior1;
  cfg.sample_sizes = sizes;
  cfg.repeats = repeats;
  cfg.noise_sigma = sigma;
  py::list out;
  for (const auto& point : sll::run_delta_mse(cfg, seed)) {
    py::dict row;
    row["sample_size"] = point.sample_size;
    row["delta_mse"] = point.delta_mse;
    row["stderr"] = point.stderr_value;
    row["repeats"] = point.repeats;
    out.append(row);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Soft-label learning toolkit core";

  py::register_exception<sll::Error>(m, "SllError");

  py::class_<sll::FittedMethod>(m, "FittedMethod")
      .def_property_readonly("method",
                             [](const sll::FittedMethod& f) { return f.spec().name; })
      .def_property_readonly("member_count", &sll::FittedMethod::member_count)
      .def("predict_proba",
           [](const sll::FittedMethod& f, const Rows& features) {
             return to_rows(f.predict_proba(to_matrix(features)));
           },
           py::arg("features"))
      .def("predict",
           [](const sll::FittedMethod& f, const Rows& features) {
             return f.predict(to_matrix(features));
           },
           py::arg("features"));

  m.def("method_names", &sll::method_names, "Registry-order wrapper method names");
  m.def("base_names", &sll::base_classifier_names, "Available base classifier names");
  m.def("fit", &fit_wrapper, py::arg("method"), py::arg("base"), py::arg("features"),
        py::arg("probs"), py::arg("seed"), py::arg("ensemble_size") = 50,
        py::arg("threshold_percentile") = 0.1,
        "Train a wrapper method around a base classifier on soft-labelled data");

  m.def("normalize",
        [](std::vector<double> raw) { return sll::normalize(std::move(raw)).probs(); },
        py::arg("raw"), "Clamp to [0, 1] and rescale to sum one");
  m.def("one_hot", [](int label, std::size_t k) { return sll::one_hot(label, k).probs(); },
        py::arg("label"), py::arg("k"));
  m.def("confidence_to_soft",
        [](int label, int confidence) {
          return sll::confidence_to_soft(label, confidence).probs();
        },
        py::arg("label"), py::arg("confidence"),
        "Binary label plus 5..10 confidence -> two-class soft label");

  m.def("tvd",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return sll::tvd(sll::ClassDistribution(a), sll::ClassDistribution(b));
        },
        py::arg("a"), py::arg("b"), "Total variation distance");
  m.def("mean_tvd",
        [](const Rows& predicted, const Rows& target) {
          return sll::mean_tvd(to_matrix(predicted), to_labels(target));
        },
        py::arg("predicted"), py::arg("target"));
  m.def("auc_binary", &sll::auc_binary, py::arg("scores"), py::arg("labels"),
        "Rank-statistic AUC with half-credit ties");
  m.def("auc",
        [](const Rows& scores, const std::vector<int>& labels) {
          return sll::auc(to_matrix(scores), labels);
        },
        py::arg("scores"), py::arg("labels"), "Macro one-vs-rest AUC over present classes");

  m.def("corrupt", &corrupt_wrapper, py::arg("probs"), py::arg("model"), py::arg("beta"),
        py::arg("seed"), "Apply a label-noise model to soft labels");
  m.def("noise_level_to_beta", &sll::noise_level_to_beta, py::arg("level"));

  m.def("simulate_delta_mse", &simulate_wrapper, py::arg("d") = 0.5, py::arg("dims") = 2,
        py::arg("prior1") = 0.5,
        py::arg("sizes") = std::vector<std::size_t>{4, 10, 30, 100, 1000},
        py::arg("repeats") = 1000, py::arg("sigma") = 0.0, py::arg("seed") = 0,
        "Paired MSE difference (soft minus hard mean estimator) per sample size");
}
