#include "fryiso/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fryiso/errors.hpp"

namespace fryiso {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t master_seed, std::uint64_t stream_id) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffULL); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(master_seed), hi(master_seed), lo(stream_id), hi(stream_id)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id), engine_(make_engine(master_seed, stream_id)) {}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return h;
}

double uniform_angle(RngStream& rng) { return kTwoPi * rng.uniform(); }

double kappa_from_a(double a, double kappa_max) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("degree of anisotropy a must lie in (0, 1]");
  if (!(kappa_max >= 0.0)) throw DomainError("kappa_max must be >= 0");
  if (a == 1.0) return 0.0;
  return kappa_max * (1.0 - std::exp(1.0 - 1.0 / a));
}

double sample_von_mises(double mu, double kappa, RngStream& rng) {
  if (!(kappa >= 0.0)) throw DomainError("von Mises concentration must be >= 0");
  if (kappa < 1e-8) return uniform_angle(rng);

  // Best & Fisher (1979) wrapped-Cauchy envelope rejection.
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double u3 = rng.uniform();
    const double z = std::cos(kPi * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double theta = std::acos(std::clamp(f, -1.0, 1.0));
      return wrap_angle(u3 > 0.5 ? mu + theta : mu - theta);
    }
  }
}

double chi2_quantile_df2(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("quantile level must lie in [0, 1)");
  return -2.0 * std::log1p(-p);
}

double sigma_from_R(double R, double p) {
  if (!(R > 0.0)) throw DomainError("range parameter R must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("containment probability must lie in (0, 1)");
  return R / std::sqrt(chi2_quantile_df2(p));
}

}  // namespace fryiso
