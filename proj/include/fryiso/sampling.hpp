#pragma once

// Seed-reproducible random sampling for the simulators and the resampling
// schemes. All conversions from raw 64-bit words to reals are done here so
// sequences are identical across standard library implementations.

#include <cstdint>
#include <random>

#include "fryiso/geometry.hpp"

namespace fryiso {

/// A single-owner random stream identified by (master_seed, stream_id).
///
/// Backed by std::mt19937_64 seeded through std::seed_seq, both of which are
/// fully specified by the standard. Distinct stream ids give unrelated
/// generator states; replicate and bootstrap indices map to stream ids so
/// results never depend on thread scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_normal_{0.0};
  bool has_spare_{false};
};

/// Mixes several words into one 64-bit seed (SplitMix64 finalizer chain).
/// Used to key per-cell / per-replicate streams off the master seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b = 0);

/// Uniform angle on [0, 2pi).
double uniform_angle(RngStream& rng);

/// Concentration kappa = kappa_max * (1 - exp(1 - 1/a)) for a in (0, 1].
double kappa_from_a(double a, double kappa_max);

/// Draw from the von Mises density proportional to exp(kappa cos(theta - mu)),
/// returned on [0, 2pi). kappa = 0 reduces to uniform_angle.
double sample_von_mises(double mu, double kappa, RngStream& rng);

/// p-quantile of the chi-square distribution with two degrees of freedom.
double chi2_quantile_df2(double p);

/// Standard deviation of an isotropic planar Gaussian placing mass p inside b_R(0).
double sigma_from_R(double R, double p);

}  // namespace fryiso
