#include "fryiso/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fryiso/errors.hpp"

namespace fryiso {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool angle_within(const Vec2& z, double alpha, double eps) {
  if (z.x == 0.0 && z.y == 0.0) return true;
  return angular_distance(z.angle(), alpha) <= eps;
}

// Index of the first grid radius >= rho, or grid.size() if none.
std::size_t first_bin(const std::vector<double>& grid, double rho) {
  return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), rho) - grid.begin());
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("radius grid is empty");
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (!(grid[j] > grid[j - 1])) throw DomainError("radius grid must be strictly ascending");
  }
}

// Per-bin sums of sector weights, accumulated to a cumulative curve.
std::vector<double> sector_bins(const FryPattern& fry, const Window& window, double alpha,
                                double eps, const std::vector<double>& grid,
                                EstimatorWarnings* warnings) {
  std::vector<double> bins(grid.size(), 0.0);
  for (const auto& z : fry.vectors) {
    const std::size_t b = first_bin(grid, z.norm());
    if (b == grid.size() || !angle_within(z, alpha, eps)) continue;
    const double overlap = translation_overlap(window, z);
    if (overlap <= 0.0) {
      if (warnings) ++warnings->zero_weight_vectors;
      continue;
    }
    bins[b] += 1.0 / overlap;
  }
  for (std::size_t j = 1; j < bins.size(); ++j) bins[j] += bins[j - 1];
  return bins;
}

}  // namespace

bool CurveStatistic::missing(std::size_t j) const { return std::isnan(values[j]); }

std::vector<double> uniform_grid(double r_max, int k) {
  if (!(r_max > 0.0) || k < 1) throw DomainError("grid needs r_max > 0 and k >= 1");
  std::vector<double> grid(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) grid[static_cast<std::size_t>(j - 1)] = j * r_max / k;
  return grid;
}

EstimatorContext EstimatorContext::from(const Window& window, std::size_t n) {
  if (n < 2) throw DataError("estimators need at least two points");
  const double nn = static_cast<double>(n);
  return {window, n, nn * (nn - 1.0) / (window.area() * window.area())};
}

double estimate_K(const FryPattern& fry, const EstimatorContext& ctx, const DirectedSet& set,
                  EstimatorWarnings* warnings) {
  validate(set);
  double sum = 0.0;
  for (const auto& z : fry.vectors) {
    if (!contains(set, z)) continue;
    const double overlap = translation_overlap(ctx.window, z);
    if (overlap <= 0.0) {
      if (warnings) ++warnings->zero_weight_vectors;
      continue;
    }
    sum += 1.0 / overlap;
  }
  return sum / ctx.squared_intensity_hat;
}

CurveStatistic sector_K_curve(const FryPattern& fry, const EstimatorContext& ctx, double alpha,
                              double eps, const std::vector<double>& grid,
                              EstimatorWarnings* warnings) {
  validate(Sector{alpha, eps, 0.0});
  check_grid(grid);
  auto values = sector_bins(fry, ctx.window, alpha, eps, grid, warnings);
  for (auto& v : values) v /= ctx.squared_intensity_hat;
  return {grid, std::move(values)};
}

CurveStatistic sector_contrast_curve(const FryPattern& fry, const EstimatorContext& ctx,
                                     double alpha1, double alpha2, double eps,
                                     const std::vector<double>& grid,
                                     EstimatorWarnings* warnings) {
  const auto first = sector_K_curve(fry, ctx, alpha1, eps, grid, warnings);
  const auto second = sector_K_curve(fry, ctx, alpha2, eps, grid, warnings);
  CurveStatistic out{grid, first.values};
  for (std::size_t j = 0; j < grid.size(); ++j) out.values[j] -= second.values[j];
  return out;
}

WongChiuGrid WongChiuGrid::standard() {
  WongChiuGrid g;
  for (int j = 0; j < 36; ++j) g.alphas.push_back(j * kPi / 36.0);
  for (int j = 1; j <= 36; ++j) g.epsilons.push_back(j * kPi / 72.0);
  return g;
}

CurveStatistic wong_chiu_curve(const FryPattern& fry, const EstimatorContext& ctx,
                               const std::vector<double>& grid, const WongChiuGrid& angles,
                               EstimatorWarnings* warnings) {
  check_grid(grid);
  const std::size_t k = grid.size();
  const std::size_t na = angles.alphas.size();
  const std::size_t ne = angles.epsilons.size();
  if (na == 0 || ne == 0) throw DomainError("direction and half-angle grids must be non-empty");
  for (std::size_t e = 0; e < ne; ++e) {
    if (!(angles.epsilons[e] >= 0.0 && angles.epsilons[e] <= 0.5 * kPi) ||
        (e > 0 && !(angles.epsilons[e] > angles.epsilons[e - 1]))) {
      throw DomainError("half-angle grid must be ascending within [0, pi/2]");
    }
  }

  // num[(b * na + a) * ne + e]: weight of vectors in radius bin b whose angular
  // distance to alpha_a first fits under eps_e.
  std::vector<double> num(k * na * ne, 0.0);
  std::vector<double> den(k, 0.0);
  for (const auto& z : fry.vectors) {
    const std::size_t b = first_bin(grid, z.norm());
    if (b == k) continue;
    const double overlap = translation_overlap(ctx.window, z);
    if (overlap <= 0.0) {
      if (warnings) ++warnings->zero_weight_vectors;
      continue;
    }
    // lambda2^ cancels in the ratio
    const double w = 1.0 / overlap;
    const bool origin = z.x == 0.0 && z.y == 0.0;
    const double theta = z.angle();
    if (origin || angular_distance(theta, 0.5 * kPi) <= 0.5 * kPi) den[b] += w;
    for (std::size_t a = 0; a < na; ++a) {
      const double d = origin ? 0.0 : angular_distance(theta, angles.alphas[a]);
      const auto e = static_cast<std::size_t>(
          std::lower_bound(angles.epsilons.begin(), angles.epsilons.end(), d) -
          angles.epsilons.begin());
      if (e < ne) num[(b * na + a) * ne + e] += w;
    }
  }

  CurveStatistic out{grid, std::vector<double>(k, kNaN)};
  std::vector<double> acc(na * ne, 0.0);
  double den_acc = 0.0;
  for (std::size_t b = 0; b < k; ++b) {
    den_acc += den[b];
    for (std::size_t i = 0; i < na * ne; ++i) acc[i] += num[b * na * ne + i];
    if (!(den_acc > 0.0)) {
      if (warnings) ++warnings->missing_points;
      continue;
    }
    double t = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
      double cum = 0.0;
      for (std::size_t e = 0; e < ne; ++e) {
        cum += acc[a * ne + e];
        const double dev = std::abs(cum / den_acc - angles.epsilons[e] / (0.5 * kPi));
        t = std::max(t, dev);
      }
    }
    out.values[b] = t;
  }
  return out;
}

double wong_chiu_ratio(const FryPattern& fry, const EstimatorContext& ctx, double r, double alpha,
                       double eps) {
  const double den = estimate_K(fry, ctx, Sector{0.5 * kPi, 0.5 * kPi, r});
  if (!(den > 0.0)) return kNaN;
  return estimate_K(fry, ctx, Sector{alpha, eps, r}) / den;
}

}  // namespace fryiso
