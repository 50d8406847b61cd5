#include "fryiso/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "fryiso/errors.hpp"

namespace fryiso {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Vec2 clamp_to(const Window& w, const Vec2& p) {
  return {std::clamp(p.x, w.x_min(), w.x_max()), std::clamp(p.y, w.y_min(), w.y_max())};
}

// Uniform point in the rounded rectangle w (+) b_r(0).
Vec2 uniform_in_dilation(const Window& w, double r, RngStream& rng) {
  const Window box = r > 0.0 ? w.expanded(r) : w;
  for (;;) {
    const Vec2 q{rng.uniform(box.x_min(), box.x_max()), rng.uniform(box.y_min(), box.y_max())};
    const double dx = std::max({0.0, w.x_min() - q.x, q.x - w.x_max()});
    const double dy = std::max({0.0, w.y_min() - q.y, q.y - w.y_max()});
    if (dx * dx + dy * dy <= r * r) return q;
  }
}

// Uniform bucket grid for neighbour counting in the Strauss sampler.
class NeighbourGrid {
 public:
  NeighbourGrid(const Window& w, double cell_min)
      : w_(w),
        nx_(std::clamp(static_cast<int>(w.width() / cell_min), 1, 512)),
        ny_(std::clamp(static_cast<int>(w.height() / cell_min), 1, 512)),
        cells_(static_cast<std::size_t>(nx_) * ny_) {}

  void insert(int id, const Vec2& p) { cells_[cell_of(p)].push_back(id); }

  void erase(int id, const Vec2& p) {
    auto& c = cells_[cell_of(p)];
    auto it = std::find(c.begin(), c.end(), id);
    *it = c.back();
    c.pop_back();
  }

  // Points within distance r of q, excluding `skip`. Requires r <= cell size.
  int count_within(const Vec2& q, double r, int skip, const std::vector<Vec2>& pts) const {
    const auto [cx, cy] = coords(q);
    const double r2 = r * r;
    int count = 0;
    for (int ix = std::max(0, cx - 1); ix <= std::min(nx_ - 1, cx + 1); ++ix) {
      for (int iy = std::max(0, cy - 1); iy <= std::min(ny_ - 1, cy + 1); ++iy) {
        for (int id : cells_[static_cast<std::size_t>(ix) * ny_ + iy]) {
          if (id != skip && (pts[id] - q).norm2() <= r2) ++count;
        }
      }
    }
    return count;
  }

 private:
  std::pair<int, int> coords(const Vec2& p) const {
    int cx = static_cast<int>((p.x - w_.x_min()) / w_.width() * nx_);
    int cy = static_cast<int>((p.y - w_.y_min()) / w_.height() * ny_);
    return {std::clamp(cx, 0, nx_ - 1), std::clamp(cy, 0, ny_ - 1)};
  }
  std::size_t cell_of(const Vec2& p) const {
    const auto [cx, cy] = coords(p);
    return static_cast<std::size_t>(cx) * ny_ + cy;
  }

  Window w_;
  int nx_;
  int ny_;
  std::vector<std::vector<int>> cells_;
};

void require_family(const ModelConfig& cfg, ModelFamily f) {
  if (cfg.family != f) {
    throw ConfigError("simulator for " + std::string(to_string(f)) + " called with family " +
                      std::string(to_string(cfg.family)));
  }
  cfg.validate();
}

}  // namespace

void PointPattern::validate() const {
  if (!marks.empty() && marks.size() != points.size()) {
    throw DataError("mark count does not match point count");
  }
  std::ostringstream bad;
  std::size_t n_bad = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !window.contains(p)) {
      if (n_bad < 10) bad << (n_bad ? ", " : "") << "#" << i << " (" << p.x << ", " << p.y << ")";
      ++n_bad;
    }
  }
  if (n_bad > 0) {
    throw DataError(std::to_string(n_bad) + " point(s) outside the window: " + bad.str() +
                    (n_bad > 10 ? ", ..." : ""));
  }
}

PointPattern PointPattern::subset_by_mark(std::string_view mark) const {
  PointPattern out{{}, window, {}};
  const std::string want = lower(mark);
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (lower(marks[i]) == want) out.points.push_back(points[i]);
  }
  return out;
}

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::Strauss: return "strauss";
    case ModelFamily::ThomasLike: return "thomas";
    case ModelFamily::PoissonLineCluster: return "line";
    case ModelFamily::MaternLikeElliptical: return "matern";
  }
  return "unknown";
}

ModelFamily parse_family(std::string_view name) {
  const std::string s = lower(name);
  if (s == "strauss") return ModelFamily::Strauss;
  if (s == "thomas" || s == "thomas-like" || s == "thomaslike") return ModelFamily::ThomasLike;
  if (s == "line" || s == "line-cluster" || s == "poissonlinecluster") {
    return ModelFamily::PoissonLineCluster;
  }
  if (s == "matern" || s == "matern-like" || s == "maternlikeelliptical") {
    return ModelFamily::MaternLikeElliptical;
  }
  throw ConfigError("unknown model family '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  if (!(a > 0.0 && a <= 1.0)) throw ConfigError("degree of anisotropy a must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("strength gamma must lie in [0, 1]");
  if (n_target < 0) throw ConfigError("n must be >= 0");
  switch (family) {
    case ModelFamily::Strauss:
      if (!(R > 0.0)) throw ConfigError("Strauss interaction radius R must be > 0");
      if (n_target < 2) throw ConfigError("Strauss needs n >= 2");
      break;
    case ModelFamily::ThomasLike:
      if (!(R > 0.0)) throw ConfigError("Thomas-like R must be > 0");
      if (!(p > 0.0 && p < 1.0)) throw ConfigError("Thomas-like p must lie in (0, 1)");
      if (cluster_sizes(gamma, n_target).n0 < 5) throw ConfigError("Thomas-like needs gamma*n >= 5");
      break;
    case ModelFamily::PoissonLineCluster:
      if (!(R >= 0.0)) throw ConfigError("line-cluster displacement R must be >= 0");
      if (!(kappa_max >= 0.0)) throw ConfigError("kappa_max must be >= 0");
      break;
    case ModelFamily::MaternLikeElliptical:
      if (!(R > 0.0)) throw ConfigError("Matern-like R must be > 0");
      if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("Matern-like tau must lie in (0, 1]");
      if (!(kappa_max >= 0.0)) throw ConfigError("kappa_max must be >= 0");
      if (cluster_sizes(gamma, n_target).n0 < 5) throw ConfigError("Matern-like needs gamma*n >= 5");
      break;
  }
}

Window table1_window(int n, double intensity) {
  if (n <= 0 || !(intensity > 0.0)) throw ConfigError("window needs n > 0 and intensity > 0");
  return Window::centered_square(std::sqrt(n / intensity));
}

Vec2 apply_compression(const Vec2& p, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("compression needs a in (0, 1]");
  return {p.x / a, a * p.y};
}

Vec2 apply_decompression(const Vec2& p, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("compression needs a in (0, 1]");
  return {a * p.x, p.y / a};
}

std::vector<Vec2> apply_compression(std::span<const Vec2> points, double a) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(apply_compression(p, a));
  return out;
}

PointPattern apply_compression(const PointPattern& pattern, double a) {
  const Vec2 lo = apply_compression(Vec2{pattern.window.x_min(), pattern.window.y_min()}, a);
  const Vec2 hi = apply_compression(Vec2{pattern.window.x_max(), pattern.window.y_max()}, a);
  Window w(lo.x, hi.x, lo.y, hi.y);
  PointPattern out{{}, w, pattern.marks};
  out.points.reserve(pattern.size());
  for (const auto& p : pattern.points) out.points.push_back(clamp_to(w, apply_compression(p, a)));
  return out;
}

Window decompressed_window(const Window& w, double a) {
  const Vec2 lo = apply_decompression({w.x_min(), w.y_min()}, a);
  const Vec2 hi = apply_decompression({w.x_max(), w.y_max()}, a);
  return Window(lo.x, hi.x, lo.y, hi.y);
}

ClusterSizes cluster_sizes(double gamma, int n_target) {
  const int n0 = static_cast<int>(std::lround(gamma * n_target));
  if (n0 <= 0) return {n0, 0};
  const int lo = std::max(1, n_target / n0);
  const int hi = lo + 1;
  const long d_lo = std::labs(static_cast<long>(n0) * lo - n_target);
  const long d_hi = std::labs(static_cast<long>(n0) * hi - n_target);
  return {n0, d_hi < d_lo ? hi : lo};
}

std::size_t count_close_pairs(std::span<const Vec2> points, double R) {
  std::size_t count = 0;
  const double r2 = R * R;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if ((points[i] - points[j]).norm2() <= r2) ++count;
    }
  }
  return count;
}

PointPattern simulate_binomial(int n, const Window& window, RngStream& rng) {
  PointPattern out{{}, window, {}};
  out.points.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    out.points.push_back({rng.uniform(window.x_min(), window.x_max()),
                          rng.uniform(window.y_min(), window.y_max())});
  }
  return out;
}

PointPattern simulate_strauss(const ModelConfig& cfg, const Window& window, RngStream& rng) {
  require_family(cfg, ModelFamily::Strauss);
  const Window pre = decompressed_window(window, cfg.a);
  const int n = cfg.n_target;
  const double R = cfg.R;
  auto uniform_point = [&] {
    return Vec2{rng.uniform(pre.x_min(), pre.x_max()), rng.uniform(pre.y_min(), pre.y_max())};
  };

  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n));
  NeighbourGrid grid(pre, R);

  if (cfg.gamma == 0.0) {
    // Random sequential adsorption gives a feasible hard-core start.
    const long max_attempts = 1000L * n;
    long attempts = 0;
    while (static_cast<int>(pts.size()) < n) {
      if (++attempts > max_attempts) {
        throw SimulationError("hard-core packing infeasible: placed " + std::to_string(pts.size()) +
                              " of " + std::to_string(n) + " points at distance >= " +
                              std::to_string(R));
      }
      const Vec2 q = uniform_point();
      if (grid.count_within(q, R, -1, pts) == 0) {
        grid.insert(static_cast<int>(pts.size()), q);
        pts.push_back(q);
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      pts.push_back(uniform_point());
      grid.insert(i, pts.back());
    }
  }

  const long moves = 2000L * n;  // 1000 n burn-in + 1000 n sampling moves
  for (long m = 0; m < moves; ++m) {
    const int idx = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    const Vec2 proposal = uniform_point();
    bool accept = true;
    if (cfg.gamma < 1.0) {
      const int delta = grid.count_within(proposal, R, idx, pts) - grid.count_within(pts[idx], R, idx, pts);
      if (delta > 0) accept = rng.uniform() < std::pow(cfg.gamma, delta);
    }
    if (accept) {
      grid.erase(idx, pts[idx]);
      pts[idx] = proposal;
      grid.insert(idx, proposal);
    }
  }

  PointPattern out{{}, window, {}};
  out.points.reserve(pts.size());
  for (const auto& p : pts) out.points.push_back(clamp_to(window, apply_compression(p, cfg.a)));
  return out;
}

ClusterRealization simulate_thomas_like_detailed(const ModelConfig& cfg, const Window& window,
                                                 RngStream& rng) {
  require_family(cfg, ModelFamily::ThomasLike);
  const auto [n0, n1] = cluster_sizes(cfg.gamma, cfg.n_target);
  const double sigma = sigma_from_R(cfg.R, cfg.p);
  const Window pre = decompressed_window(window, cfg.a);
  const auto n_parents =
      static_cast<std::size_t>(std::floor(n0 * pre.dilated_area(sigma) / window.area()));

  ClusterRealization out{PointPattern{{}, window, {}}, {}, {}, {}, {}, sigma};
  out.centers.reserve(n_parents);
  out.offspring.reserve(n_parents * static_cast<std::size_t>(n1));
  for (std::size_t c = 0; c < n_parents; ++c) {
    const Vec2 parent = uniform_in_dilation(pre, sigma, rng);
    out.centers.push_back(apply_compression(parent, cfg.a));
    for (int k = 0; k < n1; ++k) {
      const double dx = sigma * rng.normal();
      const double dy = sigma * rng.normal();
      const Vec2 child = apply_compression(parent + Vec2{dx, dy}, cfg.a);
      out.offspring.push_back(child);
      out.parent_of.push_back(c);
      if (window.contains(child)) out.pattern.points.push_back(child);
    }
  }
  return out;
}

PointPattern simulate_thomas_like(const ModelConfig& cfg, const Window& window, RngStream& rng) {
  return simulate_thomas_like_detailed(cfg, window, rng).pattern;
}

ClusterRealization simulate_matern_elliptical_detailed(const ModelConfig& cfg,
                                                       const Window& window, RngStream& rng) {
  require_family(cfg, ModelFamily::MaternLikeElliptical);
  const auto [n0, n1] = cluster_sizes(cfg.gamma, cfg.n_target);
  const double kappa = kappa_from_a(cfg.a, cfg.kappa_max);
  const auto n_centers =
      static_cast<std::size_t>(std::floor(n0 * window.dilated_area(cfg.R) / window.area()));
  const double major = cfg.R;
  const double minor = cfg.tau * cfg.R;

  ClusterRealization out{PointPattern{{}, window, {}}, {}, {}, {}, {}, 0.0};
  out.centers.reserve(n_centers);
  out.orientations.reserve(n_centers);
  for (std::size_t c = 0; c < n_centers; ++c) {
    const Vec2 center = uniform_in_dilation(window, cfg.R, rng);
    const double phi = sample_von_mises(cfg.mu, kappa, rng);
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    out.centers.push_back(center);
    out.orientations.push_back(phi);
    for (int k = 0; k < n1; ++k) {
      const double rho = std::sqrt(rng.uniform());
      const double psi = uniform_angle(rng);
      const Vec2 local{major * rho * std::cos(psi), minor * rho * std::sin(psi)};
      const Vec2 child = center + rotate(local, cphi, sphi);
      out.offspring.push_back(child);
      out.parent_of.push_back(c);
      if (window.contains(child)) out.pattern.points.push_back(child);
    }
  }
  return out;
}

PointPattern simulate_matern_elliptical(const ModelConfig& cfg, const Window& window,
                                        RngStream& rng) {
  return simulate_matern_elliptical_detailed(cfg, window, rng).pattern;
}

std::optional<Segment> clip_line(const Line& line, const Vec2& center, const Window& rect) {
  const Vec2 dir = unit_vector(line.theta);
  const Vec2 normal{-dir.y, dir.x};
  const Vec2 origin = center + normal * line.p;
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  auto slab = [&](double o, double d, double lo, double hi) {
    if (std::abs(d) < 1e-15) return o >= lo && o <= hi;
    double a = (lo - o) / d;
    double b = (hi - o) / d;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    return true;
  };
  if (!slab(origin.x, dir.x, rect.x_min(), rect.x_max())) return std::nullopt;
  if (!slab(origin.y, dir.y, rect.y_min(), rect.y_max())) return std::nullopt;
  if (!(t1 > t0)) return std::nullopt;
  return Segment{origin + dir * t0, origin + dir * t1};
}

LineRealization simulate_line_cluster_detailed(const ModelConfig& cfg, const Window& window,
                                               RngStream& rng) {
  require_family(cfg, ModelFamily::PoissonLineCluster);
  const double L = window.width();
  if (std::abs(window.height() - L) > 1e-9 * L) {
    throw ConfigError("line-cluster simulation requires a square window");
  }
  const double kappa = kappa_from_a(cfg.a, cfg.kappa_max);
  const double r_disk = L / std::sqrt(2.0);

  LineRealization out{PointPattern{{}, window, {}}, {}, window.center(), 0.0,
                      L * std::pow(5.0, 1.0 + cfg.gamma)};
  while (out.clipped_length < out.threshold) {
    const Line line{rng.uniform(-r_disk, r_disk), sample_von_mises(cfg.mu, kappa, rng)};
    out.lines.push_back(line);
    if (auto seg = clip_line(line, out.center, window)) out.clipped_length += seg->length();
  }

  // Candidate positions live on the lines clipped to the window grown by 3R.
  const Window ext = cfg.R > 0.0 ? window.expanded(3.0 * cfg.R) : window;
  std::vector<Segment> segs;
  std::vector<Vec2> normals;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& line : out.lines) {
    if (auto seg = clip_line(line, out.center, ext)) {
      total += seg->length();
      segs.push_back(*seg);
      normals.push_back({-std::sin(line.theta), std::cos(line.theta)});
      cumulative.push_back(total);
    }
  }

  auto& pts = out.pattern.points;
  pts.reserve(static_cast<std::size_t>(cfg.n_target));
  while (static_cast<int>(pts.size()) < cfg.n_target) {
    const double s = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    if (it == cumulative.end()) --it;
    const auto k = static_cast<std::size_t>(it - cumulative.begin());
    const double t = rng.uniform();
    Vec2 q = segs[k].a + (segs[k].b - segs[k].a) * t;
    if (cfg.R > 0.0) q = q + normals[k] * (cfg.R * rng.normal());
    if (window.contains(q)) pts.push_back(q);
  }
  return out;
}

PointPattern simulate_line_cluster(const ModelConfig& cfg, const Window& window, RngStream& rng) {
  return simulate_line_cluster_detailed(cfg, window, rng).pattern;
}

PointPattern simulate(const ModelConfig& cfg, const Window& window, RngStream& rng) {
  switch (cfg.family) {
    case ModelFamily::Strauss: return simulate_strauss(cfg, window, rng);
    case ModelFamily::ThomasLike: return simulate_thomas_like(cfg, window, rng);
    case ModelFamily::PoissonLineCluster: return simulate_line_cluster(cfg, window, rng);
    case ModelFamily::MaternLikeElliptical: return simulate_matern_elliptical(cfg, window, rng);
  }
  throw ConfigError("unknown model family");
}

}  // namespace fryiso
