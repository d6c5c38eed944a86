#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sll/classifiers.hpp"
#include "sll/core.hpp"
#include "sll/techniques.hpp"

namespace sll {

enum class MethodCategory { HardSingle, SoftSingle, HardEns, SoftEns };

enum class SamplingStage { None, Bootstrap, Max };

/// What happens to the labels after the optional sampling/duplication stages:
/// None trains on unit-weight plurality labels, Weights keeps the carried
/// weights (plurality or duplicate weights), LabelSample draws one hard label
/// per instance, MaxSample draws unit-weight rows from the duplicated
/// weighted set.
enum class ProcessingStage { None, Weights, LabelSample, MaxSample };

/// Declarative description of one wrapper method: which techniques run, in
/// the fixed order threshold -> plurality vote -> instance sampling ->
/// duplication -> label processing.
struct MethodSpec {
  std::string name;
  MethodCategory category = MethodCategory::HardSingle;
  bool threshold = false;
  bool plurality = false;
  SamplingStage sampling = SamplingStage::None;
  bool duplication = false;
  ProcessingStage processing = ProcessingStage::None;
  std::size_t ensemble_size = 1;
  ThresholdRule threshold_rule = ThresholdRule::percentile(0.1);
};

/// An immutable trained method: one fitted base classifier per ensemble
/// member (single methods have exactly one).
class FittedMethod {
 public:
  FittedMethod(MethodSpec spec, std::vector<std::unique_ptr<ProbabilisticClassifier>> members);

  FittedMethod(const FittedMethod&) = delete;
  FittedMethod& operator=(const FittedMethod&) = delete;
  FittedMethod(FittedMethod&&) = default;
  FittedMethod& operator=(FittedMethod&&) = default;

  const MethodSpec& spec() const { return spec_; }
  std::size_t member_count() const { return members_.size(); }

  /// Mean of the members' class-probability predictions.
  Matrix predict_proba(const Matrix& features) const;
  /// Argmax of predict_proba with ties resolved to the lowest class index.
  std::vector<int> predict(const Matrix& features) const;

 private:
  MethodSpec spec_;
  std::vector<std::unique_ptr<ProbabilisticClassifier>> members_;
};

/// The 19 method specifications, in registry order, grouped 4/2/6/7 into
/// HardSingle / SoftSingle / HardEns / SoftEns.
const std::vector<MethodSpec>& method_registry();

/// Looks a method up by name; throws SchemaError for unknown names.
const MethodSpec& method_spec(const std::string& name);

/// Registry-order method names.
std::vector<std::string> method_names();

/// Trains `spec` around clones of `base` on soft-labelled data. The seed
/// fully determines every sampling, label-drawing and fitting decision;
/// ensemble members use independent derived substreams.
FittedMethod fit_method(const MethodSpec& spec, const ProbabilisticClassifier& base,
                        const SoftDataset& data, std::uint64_t seed);

namespace detail {

/// Replaces the instance-sampling stage, letting tests splice in an identity
/// "sampler" to check composition algebra. `sampler(n, rng)` returns the
/// member's instance indices.
using SamplerOverride = std::function<std::vector<std::size_t>(std::size_t, Rng&)>;

FittedMethod fit_method_with_sampler(const MethodSpec& spec, const ProbabilisticClassifier& base,
                                     const SoftDataset& data, std::uint64_t seed,
                                     const std::optional<SamplerOverride>& sampler);

}  // namespace detail

}  // namespace sll
