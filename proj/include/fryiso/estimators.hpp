#pragma once

// Translation edge-corrected estimators of the reduced second-order moment
// measure K(B), evaluated directly on Fry points:
//
//   K^(B) = 1 / lambda2^ * sum_{z in F} 1{z in B} / |W cap W_z|,
//   lambda2^ = n (n - 1) / |W|^2,
//
// and the functional statistics built from it.

#include <cstddef>
#include <vector>

#include "fryiso/fry.hpp"
#include "fryiso/geometry.hpp"

namespace fryiso {

/// A statistic sampled on an ascending radius grid. NaN marks a missing value.
struct CurveStatistic {
  std::vector<double> r_grid;
  std::vector<double> values;

  std::size_t size() const { return r_grid.size(); }
  bool missing(std::size_t j) const;
};

inline constexpr int kDefaultGridSize = 200;

/// r_j = j r_max / k for j = 1..k.
std::vector<double> uniform_grid(double r_max, int k = kDefaultGridSize);

struct EstimatorContext {
  Window window;
  std::size_t source_n;
  double squared_intensity_hat;

  /// lambda2^ = n (n - 1) / |W|^2; throws DataError for n < 2.
  static EstimatorContext from(const Window& window, std::size_t n);
};

/// Tallies of data conditions that estimators skip rather than fault on.
struct EstimatorWarnings {
  std::size_t zero_weight_vectors{0};
  std::size_t missing_points{0};
};

double estimate_K(const FryPattern& fry, const EstimatorContext& ctx, const DirectedSet& set,
                  EstimatorWarnings* warnings = nullptr);

/// K^(S(alpha, eps, r)) for each r in the grid.
CurveStatistic sector_K_curve(const FryPattern& fry, const EstimatorContext& ctx, double alpha,
                              double eps, const std::vector<double>& grid,
                              EstimatorWarnings* warnings = nullptr);

/// K^_sect(alpha1) - K^_sect(alpha2), pointwise.
CurveStatistic sector_contrast_curve(const FryPattern& fry, const EstimatorContext& ctx,
                                     double alpha1, double alpha2, double eps,
                                     const std::vector<double>& grid,
                                     EstimatorWarnings* warnings = nullptr);

/// Finite direction and half-angle grids replacing the suprema of the
/// ratio statistic.
struct WongChiuGrid {
  std::vector<double> alphas;    // in [0, pi]
  std::vector<double> epsilons;  // ascending, in [0, pi/2]

  /// alpha_j = j pi/36 (j = 0..35), eps_j = j pi/72 (j = 1..36).
  static WongChiuGrid standard();
};

/// T(r) = max_{alpha, eps} |F^_{r,alpha}(eps) - eps / (pi/2)| with
/// F^_{r,alpha}(eps) = K^(S(alpha, eps, r)) / K^(S(pi/2, pi/2, r)).
/// Values are NaN where the half-disk denominator is zero.
CurveStatistic wong_chiu_curve(const FryPattern& fry, const EstimatorContext& ctx,
                               const std::vector<double>& grid, const WongChiuGrid& angles,
                               EstimatorWarnings* warnings = nullptr);

/// The ratio F^_{r,alpha}(eps) at a single point (NaN if the denominator is zero).
double wong_chiu_ratio(const FryPattern& fry, const EstimatorContext& ctx, double r, double alpha,
                       double eps);

}  // namespace fryiso
