#pragma once

// Simulators for the four point-process families under the shared
// (R, gamma, a) parametrization:
//   * Strauss (fixed n, geometric anisotropy),
//   * Thomas-like cluster process (fixed cluster counts, geometric anisotropy),
//   * Poisson line cluster process (von Mises line directions),
//   * Matern-like cluster process with elliptical clusters (von Mises orientations).
//
// Geometric anisotropy uses the area-preserving compression C = diag(1/a, a):
// an isotropic pattern is simulated in C^{-1} W and mapped through C.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fryiso/geometry.hpp"
#include "fryiso/sampling.hpp"

namespace fryiso {

/// A finite planar point pattern observed in a rectangular window.
/// `marks` is either empty or holds one label per point.
struct PointPattern {
  std::vector<Vec2> points;
  Window window;
  std::vector<std::string> marks;

  std::size_t size() const { return points.size(); }
  bool has_marks() const { return !marks.empty(); }

  /// Throws DataError if marks are inconsistent or points fall outside the window.
  void validate() const;

  /// Points whose mark equals `mark` (case-insensitive); marks are dropped.
  PointPattern subset_by_mark(std::string_view mark) const;
};

enum class ModelFamily { Strauss, ThomasLike, PoissonLineCluster, MaternLikeElliptical };

std::string_view to_string(ModelFamily family);
/// Accepts the canonical names (strauss, thomas, line, matern) and a few aliases.
ModelFamily parse_family(std::string_view name);

struct ModelConfig {
  ModelFamily family{ModelFamily::Strauss};
  double R{10.0};
  double gamma{0.0};
  double a{1.0};
  int n_target{300};
  // family-specific extras
  double p{0.94};             // Thomas-like containment probability
  double mu{kPi / 3.0};       // von Mises mean direction (line, Matern)
  double kappa_max{10.0};     // line, Matern
  double tau{0.4};            // Matern aspect ratio

  /// Throws ConfigError on out-of-range parameters.
  void validate() const;
};

/// Square window [-L/2, L/2]^2 whose expected count is n at the given intensity.
Window table1_window(int n, double intensity = 0.005);

/// (x, y) -> (x / a, a y).
Vec2 apply_compression(const Vec2& p, double a);
/// C^{-1}: (x, y) -> (a x, y / a).
Vec2 apply_decompression(const Vec2& p, double a);
std::vector<Vec2> apply_compression(std::span<const Vec2> points, double a);
/// Maps points and window through C.
PointPattern apply_compression(const PointPattern& pattern, double a);
/// C^{-1} W.
Window decompressed_window(const Window& w, double a);

/// Cluster counts: n0 = round(gamma n); n1 = argmin_{n1 >= 1} |n0 n1 - n|, ties downward.
struct ClusterSizes {
  int n0;
  int n1;
};
ClusterSizes cluster_sizes(double gamma, int n_target);

/// Number of R-close pairs (distance <= R, strictly positive pairs only counted once).
std::size_t count_close_pairs(std::span<const Vec2> points, double R);

/// n i.i.d. uniform points in the window (Binomial process).
PointPattern simulate_binomial(int n, const Window& window, RngStream& rng);

/// Fixed-n Strauss process: Metropolis relocation moves on C^{-1} W, then mapped by C.
PointPattern simulate_strauss(const ModelConfig& cfg, const Window& window, RngStream& rng);

/// Full record of a cluster simulation, including discarded offspring.
struct ClusterRealization {
  PointPattern pattern;
  std::vector<Vec2> centers;          // cluster centres in window coordinates
  std::vector<Vec2> offspring;        // every offspring before discarding
  std::vector<std::size_t> parent_of; // centre index per offspring
  std::vector<double> orientations;   // ellipse major-axis angles (Matern only)
  double sigma{0.0};                  // Gaussian scale (Thomas only)
};

ClusterRealization simulate_thomas_like_detailed(const ModelConfig& cfg, const Window& window,
                                                 RngStream& rng);
PointPattern simulate_thomas_like(const ModelConfig& cfg, const Window& window, RngStream& rng);

ClusterRealization simulate_matern_elliptical_detailed(const ModelConfig& cfg,
                                                       const Window& window, RngStream& rng);
PointPattern simulate_matern_elliptical(const ModelConfig& cfg, const Window& window,
                                        RngStream& rng);

/// A line in (p, theta) form relative to a reference centre c:
/// { c + p n(theta) + t u(theta) : t real }, n(theta) = (-sin theta, cos theta).
struct Line {
  double p;
  double theta;
};

struct Segment {
  Vec2 a;
  Vec2 b;
  double length() const { return (b - a).norm(); }
};

/// Clip an infinite line to a rectangle; empty if they do not meet.
std::optional<Segment> clip_line(const Line& line, const Vec2& center, const Window& rect);

struct LineRealization {
  PointPattern pattern;
  std::vector<Line> lines;
  Vec2 center;
  double clipped_length{0.0};  // total line length inside the window
  double threshold{0.0};       // stopping threshold L * 5^(1 + gamma)
};

LineRealization simulate_line_cluster_detailed(const ModelConfig& cfg, const Window& window,
                                               RngStream& rng);
PointPattern simulate_line_cluster(const ModelConfig& cfg, const Window& window, RngStream& rng);

/// Dispatch on cfg.family.
PointPattern simulate(const ModelConfig& cfg, const Window& window, RngStream& rng);

}  // namespace fryiso
