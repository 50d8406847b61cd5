#pragma once

// Monte Carlo isotropy test: the observed functional statistic T0 is ranked
// among M statistics computed from randomly rotated Fry patterns, and
//
//   p = (1 + #{i : T_i at least as extreme as T0}) / (M + 1).

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fryiso/estimators.hpp"
#include "fryiso/fry.hpp"
#include "fryiso/models.hpp"

namespace fryiso {

enum class Ordering { Integral, ERL };
enum class Sidedness { One, Two };

std::string_view to_string(Ordering ordering);
Ordering parse_ordering(std::string_view name);

/// Contrast of two sector K-functions; two-sided extremeness.
struct SectorContrastSpec {
  double alpha1{0.0};
  double alpha2{kPi / 2.0};
  double eps{kPi / 4.0};
};

/// Maximal deviation of the sector ratio from its isotropic reference; one-sided.
struct WongChiuSpec {
  WongChiuGrid grid{WongChiuGrid::standard()};
};

using StatisticSpec = std::variant<SectorContrastSpec, WongChiuSpec>;

std::string_view statistic_name(const StatisticSpec& spec);
Sidedness sidedness_of(const StatisticSpec& spec);

struct TestConfig {
  StatisticSpec statistic{SectorContrastSpec{}};
  Ordering ordering{Ordering::Integral};
  RotationScheme scheme{RotationScheme::GroupWise};
  int M{99};
  double r_max{13.0};
  int k{kDefaultGridSize};
  std::uint64_t seed{0};
  double significance{0.05};
  int threads{1};

  /// Throws ConfigError; in particular requires 1/(M+1) <= significance.
  void validate() const;
};

struct TestResult {
  double p_value{1.0};
  double observed_score{0.0};
  std::vector<double> bootstrap_scores;
  Ordering ordering{Ordering::Integral};
  std::vector<std::string> warnings;

  bool rejected(double significance) const { return p_value <= significance; }
};

/// Trapezoidal approximation of the integral of |T(r)| over the grid. Missing
/// values are skipped (neighbouring valid points are joined) and reported.
/// Throws DomainError with fewer than two usable grid points.
double integral_extremeness(const CurveStatistic& curve,
                            std::vector<std::string>* warnings = nullptr);

/// Same, restricted to grid points where `use[j]` is true.
double integral_extremeness(const CurveStatistic& curve, std::span<const char> use);

/// Extreme rank length positions of M+1 curves. Pointwise ranks run from most
/// to least extreme (ties share the minimal rank); each curve's ranks are sorted
/// ascending and compared lexicographically. Returns 1 + the number of curves
/// strictly more extreme, so 1 is most extreme and tied curves share a position.
/// Grid points missing in any curve are ignored for all curves.
/// Throws DomainError on grid mismatch.
std::vector<double> erl_order(std::span<const CurveStatistic> curves, Sidedness sidedness);

/// Monte Carlo p-value. For Integral larger scores are more extreme, for ERL smaller.
double mc_p_value(double observed_score, std::span<const double> bootstrap_scores,
                  Ordering ordering);

/// Evaluates the configured statistic on the default grid for cfg.r_max.
CurveStatistic compute_statistic(const FryPattern& fry, const EstimatorContext& ctx,
                                 const TestConfig& cfg, EstimatorWarnings* warnings = nullptr);

/// Scores the observed curve (index 0) against the bootstrap curves.
TestResult score_curves(std::span<const CurveStatistic> curves, const TestConfig& cfg);

/// Runs the test with T0 taken from `observed` and bootstrap b (stream b of
/// cfg.seed) obtained by resampling `base`. The ordinary test passes the same
/// Fry pattern twice.
TestResult isotropy_test_fry(const FryPattern& observed, const FryPattern& base,
                             const EstimatorContext& ctx, const TestConfig& cfg);

/// End-to-end test on a point pattern. Deterministic given cfg.seed and
/// independent of cfg.threads.
TestResult isotropy_test(const PointPattern& pattern, const TestConfig& cfg);

}  // namespace fryiso
