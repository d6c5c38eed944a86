#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "sll/errors.hpp"

namespace sll {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent substream seed from a master seed and a list of
/// stream coordinates (repeat index, member index, ...). Used everywhere a
/// unit of work must be reproducible regardless of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t p : parts) s = splitmix64(s ^ splitmix64(p));
  return s;
}

/// Deterministic random source. The engine is mt19937_64 (output sequence
/// fixed by the standard) and every distribution is implemented here rather
/// than with std:: distributions, whose sequences are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard Box-Muller transform; two uniforms per draw, no caching.
  double normal(double mu = 0.0, double sigma = 1.0) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mu + sigma * r * std::cos(2.0 * M_PI * u2);
  }

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  /// Fisher-Yates shuffle of an index span.
  void shuffle(std::span<std::size_t> values) {
    for (std::size_t i = values.size(); i > 1; --i) std::swap(values[i - 1], values[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Samples indices with replacement, probability proportional to weight.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::span<const double> weights) {
    cumulative_.reserve(weights.size());
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw OutOfRangeError("negative sampling weight");
      total += w;
      cumulative_.push_back(total);
    }
    if (cumulative_.empty() || total <= 0.0)
      throw AllZeroError("all sampling weights are zero");
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace sll
