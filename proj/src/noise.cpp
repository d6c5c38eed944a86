#include "sll/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sll/errors.hpp"

namespace sll {

namespace {

constexpr double kRowSumTolerance = 1e-9;
constexpr double kMaxBeta = 0.3;

// sin(pi * t) computed so that integer t gives exactly 0: reduce t by the
// nearest integer and flip the sign for odd periods.
double sin_pi(double t) {
  const double k = std::round(t);
  const double r = t - k;
  const double s = std::sin(std::numbers::pi * r);
  return static_cast<long long>(k) % 2 == 0 ? s : -s;
}

void check_error_rate(double p_e) {
  if (!(p_e >= 0.0 && p_e <= 1.0)) {
    throw OutOfRangeError("noise rate must lie in [0, 1], got " + std::to_string(p_e));
  }
}

}  // namespace

TransitionMatrix::TransitionMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() < 2) {
    throw ShapeMismatchError("a transition matrix must be square with k >= 2");
  }
  for (std::size_t i = 0; i < values_.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < values_.cols(); ++j) {
      if (values_(i, j) < 0.0) {
        throw InvalidDistributionError("transition matrix has a negative entry");
      }
      sum += values_(i, j);
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw InvalidDistributionError("transition matrix row " + std::to_string(i) +
                                     " sums to " + std::to_string(sum));
    }
  }
}

TransitionMatrix ncar_matrix(double p_e, std::size_t k) {
  check_error_rate(p_e);
  if (k < 2) throw OutOfRangeError("a transition matrix needs k >= 2");
  Matrix t(k, k, p_e / static_cast<double>(k - 1));
  for (std::size_t i = 0; i < k; ++i) t(i, i) = 1.0 - p_e;
  return TransitionMatrix(std::move(t));
}

TransitionMatrix nar_matrix(double p_e, std::size_t k, Rng& rng) {
  check_error_rate(p_e);
  if (k < 2) throw OutOfRangeError("a transition matrix needs k >= 2");
  Matrix t(k, k, 0.0);
  std::vector<double> gamma(k - 1);
  for (std::size_t i = 0; i < k; ++i) {
    // Flat Dirichlet over the k-1 off-diagonal targets: normalized unit
    // exponentials.
    double total = 0.0;
    for (double& g : gamma) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      g = -std::log(u);
      total += g;
    }
    std::size_t slot = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) {
        t(i, j) = 1.0 - p_e;
      } else {
        t(i, j) = p_e * (gamma[slot] / total);
        ++slot;
      }
    }
  }
  return TransitionMatrix(std::move(t));
}

ClassDistribution apply_transition(const ClassDistribution& label, const TransitionMatrix& t) {
  const std::size_t k = label.size();
  if (t.classes() != k) {
    throw DimensionMismatchError("transition matrix and label disagree on class count");
  }
  std::vector<double> out(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      out[j] += t(i, j) * label[i];
    }
  }
  return ClassDistribution(std::move(out));
}

ClassDistribution stochastic_blend_with(const ClassDistribution& ori,
                                        const ClassDistribution& mod, double x) {
  const std::size_t k = ori.size();
  if (mod.size() != k) {
    throw DimensionMismatchError("blend inputs disagree on class count");
  }
  std::vector<double> raw(k);
  double sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    raw[c] = std::clamp(x * mod[c] + (1.0 - x) * ori[c], 0.0, 1.0);
    sum += raw[c];
  }
  // Extreme draws can truncate away all mass; the corruption then has no
  // usable signal and the instance keeps its original label.
  if (sum <= 0.0) return ori;
  for (double& v : raw) v /= sum;
  return ClassDistribution(std::move(raw));
}

ClassDistribution stochastic_blend(const ClassDistribution& ori, const ClassDistribution& mod,
                                   Rng& rng) {
  return stochastic_blend_with(ori, mod, rng.normal(1.0, 0.5));
}

MiscalSpec::MiscalSpec(MiscalVariant variant_in, double beta_in)
    : variant(variant_in), beta(beta_in) {
  if (!(beta >= 0.0 && beta <= kMaxBeta)) {
    throw OutOfRangeError("miscalibration strength must lie in [0, 0.3], got " +
                          std::to_string(beta));
  }
}

double miscalibrate_scalar(double p, const MiscalSpec& spec) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw OutOfRangeError("probability must lie in [0, 1], got " + std::to_string(p));
  }
  double sign = 0.0;
  double eps = 0.0;
  switch (spec.variant) {
    case MiscalVariant::Overprediction: sign = 1.0; eps = 1.0; break;
    case MiscalVariant::Underprediction: sign = -1.0; eps = 1.0; break;
    case MiscalVariant::Underextremity: sign = 1.0; eps = 2.0; break;
    case MiscalVariant::Overextremity: sign = -1.0; eps = 2.0; break;
  }
  const double adjusted = p + sign * (spec.beta / eps) * sin_pi(eps * p);
  return std::clamp(adjusted, 0.0, 1.0);
}

ClassDistribution apply_miscalibration_with(const ClassDistribution& label,
                                            const MiscalSpec& spec, double x) {
  const std::size_t k = label.size();
  const std::size_t plurality = label.argmax();
  const double p = label[plurality];
  const double adjusted = miscalibrate_scalar(p, spec);

  std::vector<double> mod(k, 0.0);
  mod[plurality] = adjusted;
  const double rest = 1.0 - p;
  const double target_rest = 1.0 - adjusted;
  if (rest > 0.0) {
    const double scale = target_rest / rest;
    for (std::size_t c = 0; c < k; ++c) {
      if (c != plurality) mod[c] = label[c] * scale;
    }
  } else if (target_rest > 0.0) {
    const double share = target_rest / static_cast<double>(k - 1);
    for (std::size_t c = 0; c < k; ++c) {
      if (c != plurality) mod[c] = share;
    }
  }
  return stochastic_blend_with(label, ClassDistribution(std::move(mod)), x);
}

ClassDistribution apply_miscalibration(const ClassDistribution& label, const MiscalSpec& spec,
                                       Rng& rng) {
  return apply_miscalibration_with(label, spec, rng.normal(1.0, 0.5));
}

NoiseModel parse_noise_model(std::string_view name) {
  if (name == "ncar") return NoiseModel::NCAR;
  if (name == "nar") return NoiseModel::NAR;
  if (name == "overprediction") return NoiseModel::Overprediction;
  if (name == "underprediction") return NoiseModel::Underprediction;
  if (name == "overextremity") return NoiseModel::Overextremity;
  if (name == "underextremity") return NoiseModel::Underextremity;
  throw SchemaError("unknown noise model '" + std::string(name) +
                    "'; expected ncar, nar, overprediction, underprediction, overextremity or "
                    "underextremity");
}

std::string noise_model_name(NoiseModel model) {
  switch (model) {
    case NoiseModel::NCAR: return "ncar";
    case NoiseModel::NAR: return "nar";
    case NoiseModel::Overprediction: return "overprediction";
    case NoiseModel::Underprediction: return "underprediction";
    case NoiseModel::Overextremity: return "overextremity";
    case NoiseModel::Underextremity: return "underextremity";
  }
  throw OutOfRangeError("invalid noise model value");
}

double noise_level_to_beta(int level) {
  if (level < 0 || level > 6) {
    throw OutOfRangeError("noise level must lie in 0..6, got " + std::to_string(level));
  }
  // Divide rather than multiply by 0.05: level 6 must give the strength
  // ceiling exactly, and 6 * 0.05 lands one ulp above it.
  return static_cast<double>(level) / 20.0;
}

SoftDataset corrupt_dataset(const SoftDataset& data, NoiseModel model, double beta,
                            std::uint64_t seed) {
  if (!(beta >= 0.0 && beta <= kMaxBeta)) {
    throw OutOfRangeError("noise strength must lie in [0, 0.3], got " + std::to_string(beta));
  }
  // At zero strength every model's modified label equals the original and
  // the blend is a no-op, so skip the floating-point round trip entirely;
  // this keeps level-0 corruption bit-identical to no corruption.
  if (beta == 0.0) return data;
  std::vector<ClassDistribution> labels;
  labels.reserve(data.size());

  if (model == NoiseModel::NCAR || model == NoiseModel::NAR) {
    Rng matrix_rng(derive_seed(seed, {0}));
    const TransitionMatrix t = model == NoiseModel::NCAR
                                   ? ncar_matrix(beta, data.class_count)
                                   : nar_matrix(beta, data.class_count, matrix_rng);
    for (std::size_t i = 0; i < data.size(); ++i) {
      Rng rng(derive_seed(seed, {1, i}));
      labels.push_back(stochastic_blend(data.labels[i], apply_transition(data.labels[i], t), rng));
    }
  } else {
    MiscalVariant variant = MiscalVariant::Overprediction;
    switch (model) {
      case NoiseModel::Overprediction: variant = MiscalVariant::Overprediction; break;
      case NoiseModel::Underprediction: variant = MiscalVariant::Underprediction; break;
      case NoiseModel::Overextremity: variant = MiscalVariant::Overextremity; break;
      case NoiseModel::Underextremity: variant = MiscalVariant::Underextremity; break;
      default: break;
    }
    const MiscalSpec spec(variant, beta);
    for (std::size_t i = 0; i < data.size(); ++i) {
      Rng rng(derive_seed(seed, {1, i}));
      labels.push_back(apply_miscalibration(data.labels[i], spec, rng));
    }
  }
  return SoftDataset(data.features, std::move(labels));
}

}  // namespace sll
