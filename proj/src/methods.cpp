#include "sll/methods.hpp"

#include <algorithm>

#include "sll/errors.hpp"
#include "sll/rng.hpp"

namespace sll {

namespace {

constexpr std::size_t kDefaultEnsembleSize = 50;

MethodSpec make_spec(std::string name, MethodCategory category, bool threshold, bool plurality,
                     SamplingStage sampling, bool duplication, ProcessingStage processing) {
  MethodSpec spec;
  spec.name = std::move(name);
  spec.category = category;
  spec.threshold = threshold;
  spec.plurality = plurality;
  spec.sampling = sampling;
  spec.duplication = duplication;
  spec.processing = processing;
  const bool single =
      category == MethodCategory::HardSingle || category == MethodCategory::SoftSingle;
  spec.ensemble_size = single ? 1 : kDefaultEnsembleSize;
  return spec;
}

std::vector<MethodSpec> build_registry() {
  using C = MethodCategory;
  using S = SamplingStage;
  using P = ProcessingStage;
  std::vector<MethodSpec> specs;
  // Hard label, single classifier.
  specs.push_back(make_spec("PluralityClf", C::HardSingle, false, true, S::None, false, P::None));
  specs.push_back(
      make_spec("PluralityWeightsClf", C::HardSingle, false, true, S::None, false, P::Weights));
  specs.push_back(make_spec("ThresholdClf", C::HardSingle, true, true, S::None, false, P::None));
  specs.push_back(
      make_spec("ThresholdWeightsClf", C::HardSingle, true, true, S::None, false, P::Weights));
  // Soft label, single classifier.
  specs.push_back(
      make_spec("SampleClf", C::SoftSingle, false, false, S::None, false, P::LabelSample));
  specs.push_back(
      make_spec("DuplicateWeightsClf", C::SoftSingle, false, false, S::None, true, P::Weights));
  // Hard label, ensemble.
  specs.push_back(
      make_spec("PluralityBootstrapClf", C::HardEns, false, true, S::Bootstrap, false, P::None));
  specs.push_back(make_spec("PluralityBootstrapWeightsClf", C::HardEns, false, true, S::Bootstrap,
                            false, P::Weights));
  specs.push_back(
      make_spec("PluralityEnsembleClf", C::HardEns, false, true, S::Max, false, P::None));
  specs.push_back(
      make_spec("ThresholdBootstrapClf", C::HardEns, true, true, S::Bootstrap, false, P::None));
  specs.push_back(make_spec("ThresholdBootstrapWeightsClf", C::HardEns, true, true, S::Bootstrap,
                            false, P::Weights));
  specs.push_back(
      make_spec("ThresholdEnsembleClf", C::HardEns, true, true, S::Max, false, P::None));
  // Soft label, ensemble.
  specs.push_back(make_spec("BootstrapSamplingClf", C::SoftEns, false, false, S::Bootstrap, false,
                            P::LabelSample));
  specs.push_back(
      make_spec("EnsembleSamplingClf", C::SoftEns, false, false, S::Max, false, P::LabelSample));
  specs.push_back(
      make_spec("DuplicateEnsembleClf", C::SoftEns, false, false, S::None, true, P::MaxSample));
  specs.push_back(make_spec("BootstrapDuplicateWeightsClf", C::SoftEns, false, false, S::Bootstrap,
                            true, P::Weights));
  specs.push_back(make_spec("EnsembleDuplicateWeightsClf", C::SoftEns, false, false, S::Max, true,
                            P::Weights));
  specs.push_back(make_spec("BootstrapDuplicateSamplingClf", C::SoftEns, false, false,
                            S::Bootstrap, true, P::MaxSample));
  specs.push_back(make_spec("EnsembleDuplicateSamplingClf", C::SoftEns, false, false, S::Max, true,
                            P::MaxSample));
  return specs;
}

// Seed-derivation tags for the independent per-member substreams.
enum MemberStream : std::uint64_t { kSamplingStream = 0, kLabelStream = 1, kFitStream = 2 };

}  // namespace

FittedMethod::FittedMethod(MethodSpec spec,
                           std::vector<std::unique_ptr<ProbabilisticClassifier>> members)
    : spec_(std::move(spec)), members_(std::move(members)) {
  if (members_.empty()) {
    throw DegenerateDataError("a fitted method needs at least one member");
  }
}

Matrix FittedMethod::predict_proba(const Matrix& features) const {
  std::vector<Matrix> outputs;
  outputs.reserve(members_.size());
  for (const auto& member : members_) {
    outputs.push_back(member->predict_proba(features));
  }
  return average_probs(outputs);
}

std::vector<int> FittedMethod::predict(const Matrix& features) const {
  const Matrix probs = predict_proba(features);
  std::vector<int> labels(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    auto row = probs.row(i);
    labels[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return labels;
}

const std::vector<MethodSpec>& method_registry() {
  static const std::vector<MethodSpec> registry = build_registry();
  return registry;
}

const MethodSpec& method_spec(const std::string& name) {
  for (const MethodSpec& spec : method_registry()) {
    if (spec.name == name) return spec;
  }
  throw SchemaError("unknown method '" + name + "'");
}

std::vector<std::string> method_names() {
  std::vector<std::string> names;
  for (const MethodSpec& spec : method_registry()) names.push_back(spec.name);
  return names;
}

FittedMethod fit_method(const MethodSpec& spec, const ProbabilisticClassifier& base,
                        const SoftDataset& data, std::uint64_t seed) {
  return detail::fit_method_with_sampler(spec, base, data, seed, std::nullopt);
}

namespace detail {

FittedMethod fit_method_with_sampler(const MethodSpec& spec, const ProbabilisticClassifier& base,
                                     const SoftDataset& data, std::uint64_t seed,
                                     const std::optional<SamplerOverride>& sampler) {
  const SoftDataset working =
      spec.threshold ? threshold_filter(data, spec.threshold_rule) : data;
  const std::size_t n = working.size();
  const std::size_t k = working.class_count;

  // Plurality voting happens before any sampling, so *Weights* variants carry
  // the pre-sampling plurality probabilities with each drawn instance.
  std::vector<int> pv_labels;
  std::vector<double> pv_weights;
  if (spec.plurality) {
    pv_labels.resize(n);
    pv_weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const PluralityVote vote = plurality_vote(working.labels[i]);
      pv_labels[i] = vote.cls;
      pv_weights[i] = vote.weight;
    }
  }

  std::vector<std::unique_ptr<ProbabilisticClassifier>> members;
  members.reserve(spec.ensemble_size);
  for (std::size_t m = 0; m < spec.ensemble_size; ++m) {
    const std::uint64_t member_seed = derive_seed(seed, {m});
    Rng sampling_rng(derive_seed(member_seed, {kSamplingStream}));
    Rng label_rng(derive_seed(member_seed, {kLabelStream}));
    const std::uint64_t fit_seed = derive_seed(member_seed, {kFitStream});

    std::vector<std::size_t> indices;
    if (sampler.has_value()) {
      indices = (*sampler)(n, sampling_rng);
    } else {
      switch (spec.sampling) {
        case SamplingStage::None:
          indices.resize(n);
          for (std::size_t i = 0; i < n; ++i) indices[i] = i;
          break;
        case SamplingStage::Bootstrap:
          indices = bootstrap_sample(n, n, sampling_rng);
          break;
        case SamplingStage::Max:
          indices = max_sample(working, n, sampling_rng);
          break;
      }
    }

    WeightedHardDataset member_data = [&]() -> WeightedHardDataset {
      if (spec.plurality) {
        std::vector<int> labels(indices.size());
        std::vector<double> weights(indices.size(), 1.0);
        for (std::size_t i = 0; i < indices.size(); ++i) {
          labels[i] = pv_labels[indices[i]];
          if (spec.processing == ProcessingStage::Weights) weights[i] = pv_weights[indices[i]];
        }
        return WeightedHardDataset(working.features.select_rows(indices), std::move(labels),
                                   std::move(weights), k);
      }
      if (spec.duplication) {
        std::vector<ClassDistribution> labels;
        labels.reserve(indices.size());
        for (std::size_t i : indices) labels.push_back(working.labels[i]);
        SoftDataset selected(working.features.select_rows(indices), std::move(labels));
        WeightedHardDataset expanded = duplicate(selected);
        if (spec.processing == ProcessingStage::Weights) return expanded;
        // MaxSample processing: unit-weight rows drawn from the duplicates
        // with probability proportional to their duplicate weights.
        WeightedSampler dup_sampler(expanded.weights);
        std::vector<std::size_t> rows(indices.size());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = dup_sampler.draw(label_rng);
        std::vector<int> labels2(rows.size());
        std::vector<double> weights2(rows.size(), 1.0);
        for (std::size_t i = 0; i < rows.size(); ++i) labels2[i] = expanded.labels[rows[i]];
        return WeightedHardDataset(expanded.features.select_rows(rows), std::move(labels2),
                                   std::move(weights2), k);
      }
      // Label sampling: one hard draw per selected instance.
      std::vector<int> labels(indices.size());
      std::vector<double> weights(indices.size(), 1.0);
      for (std::size_t i = 0; i < indices.size(); ++i) {
        labels[i] = label_sample(working.labels[indices[i]], label_rng);
      }
      return WeightedHardDataset(working.features.select_rows(indices), std::move(labels),
                                 std::move(weights), k);
    }();

    auto member = base.clone_unfitted();
    member->fit(member_data, fit_seed);
    members.push_back(std::move(member));
  }

  return FittedMethod(spec, std::move(members));
}

}  // namespace detail

}  // namespace sll
