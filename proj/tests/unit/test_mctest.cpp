#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "fryiso/errors.hpp"
#include "fryiso/mctest.hpp"
#include "support/oracles.hpp"

using namespace fryiso;

namespace {

CurveStatistic curve(std::vector<double> r, std::vector<double> v) { return {std::move(r), std::move(v)}; }

// ERL by definition: pointwise rank = 1 + number of strictly more extreme values,
// position = 1 + number of curves with a lexicographically smaller sorted rank vector.
std::vector<double> erl_brute(const std::vector<std::vector<int>>& values, bool two_sided) {
  const std::size_t m = values.size(), k = values[0].size();
  std::vector<std::vector<int>> ranks(m, std::vector<int>(k));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      int larger = 0, smaller = 0;
      for (std::size_t l = 0; l < m; ++l) {
        larger += values[l][j] > values[i][j];
        smaller += values[l][j] < values[i][j];
      }
      ranks[i][j] = two_sided ? 1 + std::min(larger, smaller) : 1 + larger;
    }
  }
  for (auto& r : ranks) std::sort(r.begin(), r.end());
  std::vector<double> pos(m);
  for (std::size_t i = 0; i < m; ++i) {
    int before = 0;
    for (std::size_t l = 0; l < m; ++l) before += ranks[l] < ranks[i];
    pos[i] = 1.0 + before;
  }
  return pos;
}

std::vector<CurveStatistic> as_curves(const std::vector<std::vector<int>>& values) {
  std::vector<double> r(values[0].size());
  std::iota(r.begin(), r.end(), 1.0);
  std::vector<CurveStatistic> out;
  for (const auto& v : values) out.push_back(curve(r, std::vector<double>(v.begin(), v.end())));
  return out;
}

PointPattern poisson(int n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  return simulate_binomial(n, table1_window(n), rng);
}

}  // namespace

TEST_CASE("integral extremeness is exact for constants and linear curves") {
  std::vector<double> r, c, lin;
  for (int j = 1; j <= 200; ++j) {
    r.push_back(j * 0.005);
    c.push_back(-2.5);
    lin.push_back(j * 0.005);
  }
  CHECK(integral_extremeness(curve(r, c)) == doctest::Approx(2.5 * (1 - 0.005)).epsilon(1e-14));
  CHECK(integral_extremeness(curve(r, lin)) == doctest::Approx((1 - 0.005 * 0.005) / 2).epsilon(1e-14));
  CHECK_THROWS_AS(integral_extremeness(curve({1.0}, {1.0})), DomainError);
}

TEST_CASE("integral extremeness matches a refined quadrature") {
  RngStream rng(1, 0);
  for (int c = 0; c < 200; ++c) {
    const int k = 2 + static_cast<int>(rng.uniform_index(60));
    std::vector<double> r, v, absv;
    double x = rng.uniform(0.0, 1.0);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (int j = 0; j < k; ++j) {
      x += rng.uniform(0.01, 1.0);
      r.push_back(x);
      v.push_back(rng.uniform(-5.0, 5.0));
      absv.push_back(std::abs(v.back()));
    }
    // On a curve of one sign the trapezoid equals the integral of |linear interpolant|.
    std::vector<double> same_sign(absv);
    for (auto& y : same_sign) y *= sign;
    const double got = integral_extremeness(curve(r, same_sign));
    CHECK(std::abs(got - oracle::refined_abs_integral(r, same_sign)) <= 1e-12 * std::max(1.0, got));
    // In general it is the integral of the interpolant of |T(r_j)|.
    const double mixed = integral_extremeness(curve(r, v));
    CHECK(std::abs(mixed - oracle::refined_abs_integral(r, absv)) <= 1e-12 * std::max(1.0, mixed));
  }
}

TEST_CASE("integral extremeness skips missing points") {
  std::vector<std::string> warnings;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double v = integral_extremeness(curve({1, 2, 3, 4}, {nan, 1.0, nan, 1.0}), &warnings);
  CHECK(v == doctest::Approx(2.0));
  CHECK(warnings.size() == 1);
}

TEST_CASE("ERL hand example") {
  const std::vector<std::vector<int>> vals = {{5, 0}, {1, 1}, {0, 5}};
  const auto want = erl_brute(vals, true);
  CHECK(want == std::vector<double>{1.0, 3.0, 1.0});
  CHECK(erl_order(as_curves(vals), Sidedness::Two) == want);
  CHECK(erl_order(as_curves(vals), Sidedness::One) == erl_brute(vals, false));
}

TEST_CASE("ERL trivial cases") {
  const std::vector<std::vector<int>> same = {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
  CHECK(erl_order(as_curves(same), Sidedness::Two) == std::vector<double>{1, 1, 1});
  const std::vector<std::vector<int>> dom = {{1, -2, 3}, {-9, 9, -9}, {0, 1, 2}};
  // Two-sided, the dominating curve is most extreme, but whichever curve holds
  // the opposite tail at every point ({1,-2,3} here) shares rank 1 with it.
  const auto pos = erl_order(as_curves(dom), Sidedness::Two);
  CHECK(pos == std::vector<double>{1, 1, 3});
  const std::vector<std::vector<int>> one = {{1, 2, 3}, {9, 9, 9}, {0, 1, 2}};
  const auto pos1 = erl_order(as_curves(one), Sidedness::One);
  CHECK(pos1[1] == 1.0);
  CHECK(std::count(pos1.begin(), pos1.end(), 1.0) == 1);
  auto bad = as_curves(dom);
  bad[2].r_grid[1] = 7.0;
  CHECK_THROWS_AS(erl_order(bad, Sidedness::Two), DomainError);
}

TEST_CASE("ERL agrees with brute force: exhaustive on small tables") {
  // every table with m curves, k points, values in {0..q-1}, while q^(m k) stays below ~10^6
  long checked = 0;
  for (int m = 1; m <= 6; ++m) {
    for (int k = 1; k <= 4; ++k) {
      for (int q = 1; q <= 3; ++q) {
        const double total = std::pow(q, m * k);
        if (total > 1.1e6) continue;
        std::vector<int> digits(m * k, 0);
        for (long t = 0; t < static_cast<long>(total); ++t) {
          long rest = t;
          for (auto& d : digits) {
            d = static_cast<int>(rest % q);
            rest /= q;
          }
          std::vector<std::vector<int>> vals(m, std::vector<int>(k));
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < k; ++j) vals[i][j] = digits[i * k + j];
          const auto curves = as_curves(vals);
          if (erl_order(curves, Sidedness::Two) != erl_brute(vals, true) ||
              erl_order(curves, Sidedness::One) != erl_brute(vals, false)) {
            FAIL("mismatch at m=" << m << " k=" << k << " q=" << q << " t=" << t);
          }
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 1000000);
}

TEST_CASE("ERL agrees with brute force: random tables up to 6 curves by 4 points") {
  RngStream rng(2, 0);
  for (int c = 0; c < 200000; ++c) {
    const int m = 1 + static_cast<int>(rng.uniform_index(6));
    const int k = 1 + static_cast<int>(rng.uniform_index(4));
    const int q = 1 + static_cast<int>(rng.uniform_index(3));
    std::vector<std::vector<int>> vals(m, std::vector<int>(k));
    for (auto& row : vals)
      for (auto& v : row) v = static_cast<int>(rng.uniform_index(q));
    const auto curves = as_curves(vals);
    REQUIRE(erl_order(curves, Sidedness::Two) == erl_brute(vals, true));
    REQUIRE(erl_order(curves, Sidedness::One) == erl_brute(vals, false));
  }
}

TEST_CASE("ERL ignores grid points missing in any curve") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<CurveStatistic> curves = {curve({1, 2}, {5, nan}), curve({1, 2}, {1, 100}),
                                        curve({1, 2}, {0, -100})};
  const auto pos = erl_order(curves, Sidedness::Two);
  CHECK(pos == erl_brute({{5}, {1}, {0}}, true));
}

TEST_CASE("Monte Carlo p-values") {
  std::vector<double> none(99, 1.0), four(99, 1.0), all(99, 10.0);
  for (int i = 0; i < 4; ++i) four[i] = 5.0;
  CHECK(mc_p_value(5.0, none, Ordering::Integral) == doctest::Approx(0.01));
  CHECK(mc_p_value(5.0, four, Ordering::Integral) == doctest::Approx(0.05));
  CHECK(mc_p_value(5.0, all, Ordering::Integral) == doctest::Approx(1.0));
  // for ERL, smaller positions are more extreme
  std::vector<double> erl(99, 50.0);
  CHECK(mc_p_value(1.0, erl, Ordering::ERL) == doctest::Approx(0.01));
  erl[0] = 1.0;
  CHECK(mc_p_value(1.0, erl, Ordering::ERL) == doctest::Approx(0.02));
}

TEST_CASE("test configuration validation") {
  TestConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.M = 10;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.M = 19;
  CHECK_NOTHROW(cfg.validate());
  cfg.r_max = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TestConfig{};
  cfg.statistic = SectorContrastSpec{0, 1, 2.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(parse_ordering("ERL") == Ordering::ERL);
  CHECK(parse_ordering("integral") == Ordering::Integral);
  CHECK_THROWS_AS(parse_ordering("median"), ConfigError);
  CHECK(sidedness_of(SectorContrastSpec{}) == Sidedness::Two);
  CHECK(sidedness_of(WongChiuSpec{}) == Sidedness::One);
}

TEST_CASE("scores are invariant to positive scaling and bootstrap permutation") {
  RngStream rng(3, 0);
  for (int c = 0; c < 50; ++c) {
    const int m = 20, k = 15;
    std::vector<CurveStatistic> curves;
    for (int i = 0; i < m; ++i) {
      std::vector<double> r, v;
      for (int j = 1; j <= k; ++j) {
        r.push_back(j);
        v.push_back(rng.normal());
      }
      curves.push_back(curve(r, v));
    }
    for (auto ordering : {Ordering::Integral, Ordering::ERL}) {
      TestConfig cfg;
      cfg.ordering = ordering;
      cfg.M = m - 1;
      cfg.significance = 0.1;
      const double p = score_curves(curves, cfg).p_value;
      auto scaled = curves;
      for (auto& cv : scaled)
        for (auto& v : cv.values) v *= 3.7;
      CHECK(score_curves(scaled, cfg).p_value == p);
      auto shuffled = curves;
      std::reverse(shuffled.begin() + 1, shuffled.end());
      CHECK(score_curves(shuffled, cfg).p_value == p);
      const double j = p * m;
      CHECK(std::abs(j - std::round(j)) < 1e-9);
    }
  }
}

TEST_CASE("isotropy test is deterministic and independent of threads") {
  const auto p = poisson(200, 4);
  for (auto ordering : {Ordering::Integral, Ordering::ERL}) {
    for (bool wong_chiu : {false, true}) {
      TestConfig cfg;
      cfg.ordering = ordering;
      if (wong_chiu) cfg.statistic = WongChiuSpec{};
      cfg.r_max = 30.0;
      cfg.seed = 77;
      const auto a = isotropy_test(p, cfg);
      const auto b = isotropy_test(p, cfg);
      cfg.threads = 4;
      const auto c = isotropy_test(p, cfg);
      CHECK(a.p_value == b.p_value);
      CHECK(a.bootstrap_scores == b.bootstrap_scores);
      CHECK(a.bootstrap_scores == c.bootstrap_scores);
      CHECK(a.observed_score == c.observed_score);
      REQUIRE(a.bootstrap_scores.size() == 99);
    }
  }
}

TEST_CASE("a pre-clipped Fry pattern gives the same test as the full one") {
  const auto p = poisson(150, 5);
  TestConfig cfg;
  cfg.r_max = 20.0;
  cfg.seed = 6;
  const auto full = fry_points(p);
  const auto ctx = EstimatorContext::from(p.window, p.size());
  const auto a = isotropy_test_fry(full, full, ctx, cfg);
  const auto b = isotropy_test(p, cfg);
  CHECK(a.p_value == b.p_value);
  CHECK(a.bootstrap_scores == b.bootstrap_scores);
}

TEST_CASE("isotropy test input errors") {
  const PointPattern one{{{1.0, 1.0}}, Window(0, 2, 0, 2), {}};
  CHECK_THROWS_AS(isotropy_test(one, TestConfig{}), DataError);
  TestConfig cfg;
  cfg.M = 5;
  CHECK_THROWS_AS(isotropy_test(poisson(50, 1), cfg), ConfigError);
}

TEST_CASE("null calibration under exchangeability") {
  // Observed Fry set is itself a group-wise rotation of the base set, so all
  // M+1 curves are exchangeable and p must be uniform on {1/100, ..., 1}.
  const int runs = 1000;
  for (auto ordering : {Ordering::Integral, Ordering::ERL}) {
    std::vector<double> ps;
    for (int r = 0; r < runs; ++r) {
      const auto p = poisson(100, 10000 + r);
      const auto base = fry_points(p, 13.0);
      RngStream obs_rng(20000 + r, 0);
      const auto observed = resample(base, RotationScheme::GroupWise, obs_rng);
      TestConfig cfg;
      cfg.ordering = ordering;
      cfg.seed = 30000 + r;
      ps.push_back(isotropy_test_fry(observed, base, EstimatorContext::from(p.window, p.size()), cfg).p_value);
    }
    CAPTURE(to_string(ordering));
    for (double alpha : {0.01, 0.05, 0.1}) {
      const double rate = std::count_if(ps.begin(), ps.end(), [&](double x) { return x <= alpha + 1e-12; }) /
                          static_cast<double>(runs);
      CAPTURE(alpha);
      CHECK(rate <= alpha + 0.02);
    }
    CHECK(oracle::ks_discrete_uniform(ps, 100) < oracle::ks_critical(runs, 0.01));
  }
}

TEST_CASE("compressed Poisson is still isotropic") {
  // Mapping a uniform pattern through the area-preserving compression gives
  // another uniform pattern, so the test must behave as under the null.
  int rejections = 0;
  for (int r = 0; r < 100; ++r) {
    RngStream rng(40000 + r, 0);
    const Window w = table1_window(300);
    const auto pre = simulate_binomial(300, decompressed_window(w, 0.5), rng);
    PointPattern p = apply_compression(pre, 0.5);
    TestConfig cfg;
    cfg.seed = 50000 + r;
    rejections += isotropy_test(p, cfg).rejected(0.05);
  }
  CHECK(rejections <= 12);
}

TEST_CASE("strong geometric anisotropy is detected") {
  ModelConfig m;
  m.family = ModelFamily::Strauss;
  m.R = 10.0;
  m.gamma = 0.0;
  m.a = 0.5;
  m.n_target = 300;
  int rejections = 0;
  for (int r = 0; r < 100; ++r) {
    RngStream rng(60000 + r, 0);
    const auto p = simulate_strauss(m, table1_window(300), rng);
    TestConfig cfg;
    cfg.seed = 70000 + r;
    rejections += isotropy_test(p, cfg).rejected(0.05);
  }
  CHECK(rejections >= 90);
}
