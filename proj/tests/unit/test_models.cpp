#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "fryiso/errors.hpp"
#include "fryiso/models.hpp"
#include "support/oracles.hpp"

using namespace fryiso;

namespace {

ModelConfig config(ModelFamily f, double R, double gamma, double a, int n) {
  ModelConfig c;
  c.family = f;
  c.R = R;
  c.gamma = gamma;
  c.a = a;
  c.n_target = n;
  return c;
}

bool inside(const PointPattern& p) {
  for (const auto& q : p.points) {
    if (!p.window.contains(q)) return false;
  }
  return true;
}

double distance_to_line(const Vec2& q, const Line& line, const Vec2& center) {
  const Vec2 normal{-std::sin(line.theta), std::cos(line.theta)};
  return std::abs(dot(q - center, normal) - line.p);
}

}  // namespace

TEST_CASE("compression") {
  CHECK(apply_compression(Vec2{1.0, 1.0}, 0.5) == Vec2{2.0, 0.5});
  CHECK(apply_compression(Vec2{3.0, -7.0}, 1.0) == Vec2{3.0, -7.0});
  CHECK(apply_decompression(apply_compression(Vec2{3.0, -7.0}, 0.7), 0.7).x == doctest::Approx(3.0));
  CHECK_THROWS_AS(apply_compression(Vec2{1.0, 1.0}, 0.0), DomainError);
  CHECK_THROWS_AS(apply_compression(Vec2{1.0, 1.0}, 1.5), DomainError);

  // area preservation: shoelace area of a random polygon
  RngStream rng(1, 0);
  std::vector<Vec2> poly;
  for (int i = 0; i < 12; ++i) {
    const double t = kTwoPi * i / 12.0;
    const double r = rng.uniform(1.0, 3.0);
    poly.push_back({r * std::cos(t), r * std::sin(t)});
  }
  auto area = [](const std::vector<Vec2>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto& u = p[i];
      const auto& v = p[(i + 1) % p.size()];
      s += u.x * v.y - v.x * u.y;
    }
    return 0.5 * std::abs(s);
  };
  CHECK(area(apply_compression(poly, 0.37)) == doctest::Approx(area(poly)).epsilon(1e-12));

  const Window w = Window::centered_square(10.0);
  const Window pre = decompressed_window(w, 0.5);
  CHECK(pre.width() == doctest::Approx(5.0));
  CHECK(pre.height() == doctest::Approx(20.0));
}

TEST_CASE("table 1 windows") {
  CHECK(table1_window(300).width() == doctest::Approx(std::sqrt(300 / 0.005)));
  CHECK(table1_window(300).area() == doctest::Approx(60000.0));
  CHECK(table1_window(100).center() == Vec2{0.0, 0.0});
}

TEST_CASE("cluster sizes by brute force") {
  CHECK(cluster_sizes(0.15, 300).n0 == 45);
  CHECK(cluster_sizes(0.15, 300).n1 == 7);
  CHECK(cluster_sizes(1.0, 300).n1 == 1);
  for (double gamma : {0.05, 0.1, 0.15, 0.25, 0.4, 0.8, 1.0}) {
    for (int n : {37, 100, 299, 300, 500, 1001}) {
      const auto cs = cluster_sizes(gamma, n);
      CAPTURE(gamma);
      CAPTURE(n);
      REQUIRE(cs.n0 == static_cast<int>(std::lround(gamma * n)));
      if (cs.n0 < 1) continue;
      int best = 1;
      for (int n1 = 1; n1 <= n + 1; ++n1) {
        if (std::abs(cs.n0 * n1 - n) < std::abs(cs.n0 * best - n)) best = n1;
      }
      CHECK(cs.n1 == best);
    }
  }
}

TEST_CASE("model config validation") {
  CHECK_THROWS_AS(config(ModelFamily::ThomasLike, 10, 0.01, 1, 300).validate(), ConfigError);
  CHECK_NOTHROW(config(ModelFamily::ThomasLike, 10, 0.05, 1, 100).validate());
  CHECK_THROWS_AS(config(ModelFamily::MaternLikeElliptical, 10, 0.04, 1, 100).validate(), ConfigError);
  CHECK_THROWS_AS(config(ModelFamily::Strauss, 10, 1.2, 1, 100).validate(), ConfigError);
  CHECK_THROWS_AS(config(ModelFamily::Strauss, 10, 0.5, 0, 100).validate(), ConfigError);
  CHECK(parse_family("Thomas") == ModelFamily::ThomasLike);
  CHECK(parse_family("MATERN") == ModelFamily::MaternLikeElliptical);
  CHECK_THROWS_AS(parse_family("gauss"), ConfigError);
}

TEST_CASE("Strauss: exact count, hard core in pre-image coordinates") {
  const auto cfg = config(ModelFamily::Strauss, 10.0, 0.0, 0.7, 300);
  const Window w = table1_window(300);
  RngStream rng(7, 0);
  const auto pat = simulate_strauss(cfg, w, rng);
  REQUIRE(pat.size() == 300);
  CHECK(inside(pat));
  double min_dist = INFINITY;
  for (std::size_t i = 0; i < pat.size(); ++i) {
    for (std::size_t j = i + 1; j < pat.size(); ++j) {
      min_dist = std::min(min_dist, apply_decompression(pat.points[i] - pat.points[j], 0.7).norm());
    }
  }
  CHECK(min_dist >= 10.0 - 1e-9);
}

TEST_CASE("Strauss: infeasible hard-core packing is reported") {
  const auto cfg = config(ModelFamily::Strauss, 40.0, 0.0, 1.0, 300);
  RngStream rng(1, 0);
  CHECK_THROWS_AS(simulate_strauss(cfg, table1_window(300), rng), SimulationError);
}

TEST_CASE("Strauss with gamma = 1 matches the Binomial process") {
  const int n = 100, runs = 500;
  const double R = 10.0;
  const Window w = table1_window(n);
  auto stats = [](const std::vector<double>& v) {
    double m = 0.0, s = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, std::sqrt(s / (v.size() - 1) / v.size())};
  };
  std::vector<double> strauss(runs), binomial(runs);
  const auto cfg = config(ModelFamily::Strauss, R, 1.0, 1.0, n);
  for (int r = 0; r < runs; ++r) {
    RngStream rng(100, r);
    strauss[r] = static_cast<double>(count_close_pairs(simulate_strauss(cfg, w, rng).points, R));
    // the oracle draws its own uniforms, independent of the library simulators
    std::mt19937_64 gen(5000 + r);
    std::uniform_real_distribution<double> ux(w.x_min(), w.x_max()), uy(w.y_min(), w.y_max());
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = {ux(gen), uy(gen)};
    binomial[r] = static_cast<double>(count_close_pairs(pts, R));
  }
  const auto [ms, ss] = stats(strauss);
  const auto [mb, sb] = stats(binomial);
  CAPTURE(ms);
  CAPTURE(mb);
  CHECK(std::abs(ms - mb) <= 3.0 * std::hypot(ss, sb));
}

TEST_CASE("Strauss with gamma = 0.4 reduces close pairs") {
  const int n = 100;
  const Window w = table1_window(n);
  double s04 = 0.0, s1 = 0.0;
  for (int r = 0; r < 50; ++r) {
    RngStream a(9, r), b(10, r);
    s04 += count_close_pairs(simulate_strauss(config(ModelFamily::Strauss, 10, 0.4, 1, n), w, a).points, 10);
    s1 += count_close_pairs(simulate_strauss(config(ModelFamily::Strauss, 10, 1.0, 1, n), w, b).points, 10);
  }
  CHECK(s04 < 0.7 * s1);
}

TEST_CASE("simulators are reproducible and a = 1 is the isotropic path") {
  const Window w = table1_window(300);
  for (auto f : {ModelFamily::Strauss, ModelFamily::ThomasLike, ModelFamily::PoissonLineCluster,
                 ModelFamily::MaternLikeElliptical}) {
    CAPTURE(to_string(f));
    const double R = f == ModelFamily::PoissonLineCluster ? 1.0 : 10.0;
    const double gamma = f == ModelFamily::Strauss ? 0.4 : 0.15;
    const auto cfg = config(f, R, gamma, 1.0, 300);
    RngStream r1(3, 4), r2(3, 4);
    const auto p1 = simulate(cfg, w, r1);
    const auto p2 = simulate(cfg, w, r2);
    CHECK(p1.points == p2.points);
    CHECK(apply_compression(p1, 1.0).points == p1.points);
    CHECK(inside(p1));
  }
}

TEST_CASE("Thomas-like containment and cluster structure") {
  auto cfg = config(ModelFamily::ThomasLike, 10.0, 0.15, 1.0, 300);
  const Window w = table1_window(300);
  std::size_t within = 0, total = 0;
  for (int r = 0; total < 100000; ++r) {
    RngStream rng(11, r);
    const auto rz = simulate_thomas_like_detailed(cfg, w, rng);
    CHECK(rz.sigma == doctest::Approx(sigma_from_R(10.0, 0.94)));
    for (std::size_t k = 0; k < rz.offspring.size(); ++k) {
      within += (rz.offspring[k] - rz.centers[rz.parent_of[k]]).norm() <= 10.0;
      ++total;
    }
    CHECK(rz.offspring.size() == rz.centers.size() * 7);
  }
  CHECK(std::abs(static_cast<double>(within) / total - 0.94) <= 0.01);

  cfg.gamma = 1.0;
  RngStream rng(12, 0);
  const auto single = simulate_thomas_like_detailed(cfg, w, rng);
  CHECK(single.offspring.size() == single.centers.size());
}

TEST_CASE("cluster models: mean count and intensity") {
  for (auto f : {ModelFamily::ThomasLike, ModelFamily::MaternLikeElliptical}) {
    for (double gamma : {0.05, 0.15, 0.25}) {
      CAPTURE(to_string(f));
      CAPTURE(gamma);
      const int n = 300;
      const auto cfg = config(f, 10.0, gamma, 0.7, n);
      const Window w = table1_window(n);
      double mean = 0.0;
      for (int r = 0; r < 200; ++r) {
        RngStream rng(13, r);
        mean += static_cast<double>(simulate(cfg, w, rng).size());
      }
      mean /= 200.0;
      CHECK(std::abs(mean - n) <= 0.05 * n);
      CHECK(std::abs(mean / w.area() - 0.005) <= 0.05 * 0.005);
    }
  }
}

TEST_CASE("Matern-like: disks when tau = 1, axial uniformity, von Mises orientation") {
  auto cfg = config(ModelFamily::MaternLikeElliptical, 10.0, 0.15, 1.0, 300);
  cfg.tau = 1.0;
  const Window w = table1_window(300);
  {
    RngStream rng(14, 0);
    const auto rz = simulate_matern_elliptical_detailed(cfg, w, rng);
    for (std::size_t k = 0; k < rz.offspring.size(); ++k) {
      CHECK((rz.offspring[k] - rz.centers[rz.parent_of[k]]).norm() <= 10.0 + 1e-9);
    }
  }
  cfg.tau = 0.4;
  std::vector<double> doubled;
  for (int r = 0; r < 500; ++r) {
    RngStream rng(15, r);
    for (double phi : simulate_matern_elliptical_detailed(cfg, w, rng).orientations) {
      doubled.push_back(2.0 * phi);
    }
  }
  CHECK(oracle::resultant_length(doubled) < 0.1);

  cfg.a = 0.7;
  cfg.mu = kPi / 3;
  std::vector<double> phis;
  for (int r = 0; phis.size() < 500; ++r) {
    RngStream rng(16, r);
    for (double phi : simulate_matern_elliptical_detailed(cfg, w, rng).orientations) phis.push_back(phi);
  }
  phis.resize(500);
  CHECK(std::abs(oracle::circular_mean(phis) - kPi / 3) < 0.1);

  // offspring lie inside their ellipse
  RngStream rng(17, 0);
  const auto rz = simulate_matern_elliptical_detailed(cfg, w, rng);
  for (std::size_t k = 0; k < rz.offspring.size(); ++k) {
    const Vec2 local = rotate(rz.offspring[k] - rz.centers[rz.parent_of[k]], -rz.orientations[rz.parent_of[k]]);
    const double q = (local.x / 10.0) * (local.x / 10.0) + (local.y / 4.0) * (local.y / 4.0);
    CHECK(q <= 1.0 + 1e-9);
  }
}

TEST_CASE("line clipping") {
  const Window w(0.0, 10.0, 0.0, 10.0);
  const auto horiz = clip_line({0.0, 0.0}, {5.0, 5.0}, w);
  REQUIRE(horiz);
  CHECK(horiz->length() == doctest::Approx(10.0));
  const auto diag = clip_line({0.0, kPi / 4}, {5.0, 5.0}, w);
  REQUIRE(diag);
  CHECK(diag->length() == doctest::Approx(10.0 * std::sqrt(2.0)));
  CHECK_FALSE(clip_line({8.0, 0.0}, {5.0, 5.0}, w));
  const auto vert = clip_line({-2.0, kPi / 2}, {5.0, 5.0}, w);
  REQUIRE(vert);
  CHECK(vert->a.x == doctest::Approx(7.0));
  CHECK(vert->length() == doctest::Approx(10.0));
}

TEST_CASE("line cluster: stopping rule and points on lines") {
  const double L = 100.0 * std::sqrt(6.0);
  const Window w = Window::centered_square(L);
  for (double gamma : {0.0, 0.4, 0.8}) {
    auto cfg = config(ModelFamily::PoissonLineCluster, 0.0, gamma, 0.7, 300);
    RngStream rng(18, static_cast<std::uint64_t>(gamma * 10));
    const auto rz = simulate_line_cluster_detailed(cfg, w, rng);
    CHECK(rz.threshold == doctest::Approx(L * std::pow(5.0, 1.0 + gamma)));
    CHECK(rz.clipped_length >= rz.threshold);
    CHECK(rz.clipped_length < rz.threshold + 2.0 * L / std::sqrt(2.0));
    REQUIRE(rz.pattern.size() == 300);
    CHECK(inside(rz.pattern));
    for (const auto& q : rz.pattern.points) {
      double best = INFINITY;
      for (const auto& line : rz.lines) best = std::min(best, distance_to_line(q, line, rz.center));
      CHECK(best < 1e-9 * L);
    }
  }
  CHECK(Window::centered_square(L).width() * 5.0 == doctest::Approx(1224.74).epsilon(1e-5));

  auto cfg = config(ModelFamily::PoissonLineCluster, 1.0, 0.0, 1.0, 300);
  RngStream rng(19, 0);
  const auto rz = simulate_line_cluster_detailed(cfg, table1_window(300), rng);
  CHECK(rz.pattern.size() == 300);
  CHECK(inside(rz.pattern));
  CHECK_THROWS_AS(simulate_line_cluster(cfg, Window(0, 10, 0, 20), rng), ConfigError);
}

TEST_CASE("line directions follow the von Mises law") {
  auto cfg = config(ModelFamily::PoissonLineCluster, 1.0, 0.8, 0.5, 10);
  cfg.mu = 1.0;
  std::vector<double> thetas;
  for (int r = 0; r < 20; ++r) {
    RngStream rng(20, r);
    for (const auto& l : simulate_line_cluster_detailed(cfg, table1_window(300), rng).lines) {
      thetas.push_back(l.theta);
    }
  }
  const double kappa = kappa_from_a(0.5, 10.0);
  CHECK(std::abs(oracle::circular_mean(thetas) - 1.0) < 0.05);
  CHECK(oracle::resultant_length(thetas) ==
        doctest::Approx(oracle::bessel_i(1, kappa) / oracle::bessel_i(0, kappa)).epsilon(0.03));
}

TEST_CASE("pattern validation and marks") {
  PointPattern p{{{1.0, 1.0}, {2.0, 2.0}, {11.0, 2.0}}, Window(0, 10, 0, 10), {}};
  CHECK_THROWS_AS(p.validate(), DataError);
  p.points.pop_back();
  CHECK_NOTHROW(p.validate());
  p.marks = {"On", "off"};
  CHECK(p.subset_by_mark("on").size() == 1);
  CHECK(p.subset_by_mark("OFF").points[0] == Vec2{2.0, 2.0});
  p.marks = {"on"};
  CHECK_THROWS_AS(p.validate(), DataError);
}
