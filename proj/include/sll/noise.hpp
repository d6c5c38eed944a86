#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sll/core.hpp"
#include "sll/matrix.hpp"
#include "sll/rng.hpp"

namespace sll {

/// Row-stochastic class-transition matrix: entry (i, j) is the probability
/// of observing class j when the true class is i.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(Matrix values);

  std::size_t classes() const { return values_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const Matrix& values() const { return values_; }

 private:
  Matrix values_;
};

/// Uniform (class-independent) noise: diagonal 1 - p_e, every off-diagonal
/// entry p_e / (k - 1).
TransitionMatrix ncar_matrix(double p_e, std::size_t k);

/// Class-dependent noise: diagonal exactly 1 - p_e, each row's off-diagonal
/// mass p_e split randomly via a flat Dirichlet draw over the other classes.
TransitionMatrix nar_matrix(double p_e, std::size_t k, Rng& rng);

/// Redistributes label mass through the transition matrix: result = T' p.
ClassDistribution apply_transition(const ClassDistribution& label, const TransitionMatrix& t);

/// Deterministic core of the stochastic blend: y = x * mod + (1 - x) * ori,
/// entries truncated to [0, 1], then normalized. Falls back to `ori` when
/// truncation removes all mass.
ClassDistribution stochastic_blend_with(const ClassDistribution& ori,
                                        const ClassDistribution& mod, double x);

/// Blend with x drawn from Normal(1.0, 0.5).
ClassDistribution stochastic_blend(const ClassDistribution& ori, const ClassDistribution& mod,
                                   Rng& rng);

enum class MiscalVariant { Overprediction, Underprediction, Overextremity, Underextremity };

/// A miscalibration curve: variant fixes the sign and period of the sine
/// perturbation, beta in [0, 0.3] its strength (the range on which the curve
/// stays strictly increasing).
struct MiscalSpec {
  MiscalVariant variant = MiscalVariant::Overprediction;
  double beta = 0.0;

  MiscalSpec() = default;
  MiscalSpec(MiscalVariant variant, double beta);
};

/// The miscalibration curve p_hat = p + s * (beta / eps) * sin(eps * pi * p)
/// clamped to [0, 1], with (s, eps) = (+, 1) overprediction, (-, 1)
/// underprediction, (+, 2) underextremity, (-, 2) overextremity. Fixes 0 and
/// 1 exactly (and 0.5 for the extremity variants).
double miscalibrate_scalar(double p, const MiscalSpec& spec);

/// Deterministic core: applies the curve to the plurality class, rescales
/// the remaining classes proportionally to restore unit mass (splitting
/// uniformly if they had none), and blends with the original using the given
/// x.
ClassDistribution apply_miscalibration_with(const ClassDistribution& label,
                                            const MiscalSpec& spec, double x);

/// Miscalibration with x drawn from Normal(1.0, 0.5).
ClassDistribution apply_miscalibration(const ClassDistribution& label, const MiscalSpec& spec,
                                       Rng& rng);

enum class NoiseModel { NCAR, NAR, Overprediction, Underprediction, Overextremity, Underextremity };

/// CLI-facing names: ncar, nar, overprediction, underprediction,
/// overextremity, underextremity.
NoiseModel parse_noise_model(std::string_view name);
std::string noise_model_name(NoiseModel model);

/// Noise level i in 0..6 maps linearly to strength beta = 0.05 * i.
double noise_level_to_beta(int level);

/// Corrupts every label independently: transition models build one matrix
/// per call (NAR draws it randomly) and blend each transformed label with
/// the original; miscalibration models perturb each label's plurality class.
/// Per-instance randomness comes from substreams keyed by instance index.
SoftDataset corrupt_dataset(const SoftDataset& data, NoiseModel model, double beta,
                            std::uint64_t seed);

}  // namespace sll
