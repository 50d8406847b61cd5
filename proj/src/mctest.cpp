#include "fryiso/mctest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "fryiso/errors.hpp"
#include "fryiso/parallel.hpp"

namespace fryiso {

namespace {

std::string normalized(std::string_view name) {
  std::string s;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return s;
}

// Grid points usable for every curve.
std::vector<char> common_support(std::span<const CurveStatistic> curves) {
  if (curves.empty()) return {};
  const std::size_t k = curves[0].size();
  std::vector<char> use(k, 1);
  for (const auto& c : curves) {
    if (c.size() != k || c.values.size() != k) throw DomainError("curves are on different grids");
    for (std::size_t j = 0; j < k; ++j) {
      if (c.r_grid[j] != curves[0].r_grid[j]) throw DomainError("curves are on different grids");
      if (c.missing(j)) use[j] = 0;
    }
  }
  return use;
}

// Pointwise ranks at one grid point, 1 = most extreme, ties share the minimal rank.
void pointwise_ranks(std::span<const double> values, Sidedness sidedness, std::vector<int>& out) {
  const std::size_t m = values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<int> asc(m), desc(m);
  // ascending rank: 1 + #{strictly smaller}
  for (std::size_t pos = 0; pos < m;) {
    std::size_t end = pos;
    while (end < m && values[order[end]] == values[order[pos]]) ++end;
    for (std::size_t q = pos; q < end; ++q) {
      asc[order[q]] = static_cast<int>(pos) + 1;
      desc[order[q]] = static_cast<int>(m - end) + 1;  // 1 + #{strictly larger}
    }
    pos = end;
  }
  out.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = sidedness == Sidedness::One ? desc[i] : std::min(asc[i], desc[i]);
  }
}

}  // namespace

std::string_view to_string(Ordering ordering) {
  return ordering == Ordering::Integral ? "integral" : "erl";
}

Ordering parse_ordering(std::string_view name) {
  const std::string s = normalized(name);
  if (s == "integral" || s == "int") return Ordering::Integral;
  if (s == "erl") return Ordering::ERL;
  throw ConfigError("unknown ordering '" + std::string(name) + "'");
}

std::string_view statistic_name(const StatisticSpec& spec) {
  return std::holds_alternative<SectorContrastSpec>(spec) ? "sector_contrast" : "wong_chiu";
}

Sidedness sidedness_of(const StatisticSpec& spec) {
  return std::holds_alternative<SectorContrastSpec>(spec) ? Sidedness::Two : Sidedness::One;
}

void TestConfig::validate() const {
  if (M < 1) throw ConfigError("number of bootstrap samples M must be >= 1");
  if (!(significance > 0.0 && significance < 1.0)) {
    throw ConfigError("significance level must lie in (0, 1)");
  }
  if (1.0 / (M + 1.0) > significance) {
    throw ConfigError("1/(M+1) exceeds the significance level; increase M");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("r_max must be positive");
  if (k < 2) throw ConfigError("grid size k must be >= 2");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (const auto* sc = std::get_if<SectorContrastSpec>(&statistic)) {
    if (!(sc->eps >= 0.0 && 2.0 * sc->eps <= kPi)) {
      throw ConfigError("sector half-angle must satisfy 0 <= 2 eps <= pi");
    }
  } else {
    const auto& g = std::get<WongChiuSpec>(statistic).grid;
    if (g.alphas.empty() || g.epsilons.empty()) throw ConfigError("empty Wong-Chiu grid");
  }
}

double integral_extremeness(const CurveStatistic& curve, std::span<const char> use) {
  double sum = 0.0;
  std::size_t used = 0;
  std::size_t prev = 0;
  for (std::size_t j = 0; j < curve.size(); ++j) {
    if (!use[j] || curve.missing(j)) continue;
    if (used > 0) {
      sum += 0.5 * (curve.r_grid[j] - curve.r_grid[prev]) *
             (std::abs(curve.values[prev]) + std::abs(curve.values[j]));
    }
    prev = j;
    ++used;
  }
  if (used < 2) throw DomainError("integral ordering needs at least two grid points");
  return sum;
}

double integral_extremeness(const CurveStatistic& curve, std::vector<std::string>* warnings) {
  if (curve.size() < 2) throw DomainError("integral ordering needs at least two grid points");
  std::vector<char> use(curve.size(), 1);
  std::size_t missing = 0;
  for (std::size_t j = 0; j < curve.size(); ++j) missing += curve.missing(j) ? 1 : 0;
  if (missing > 0 && warnings) {
    warnings->push_back("skipped " + std::to_string(missing) + " missing grid point(s)");
  }
  return integral_extremeness(curve, use);
}

std::vector<double> erl_order(std::span<const CurveStatistic> curves, Sidedness sidedness) {
  const std::size_t m = curves.size();
  if (m == 0) return {};
  const auto use = common_support(curves);

  std::vector<std::vector<int>> rank_vectors(m);
  std::vector<double> column(m);
  std::vector<int> ranks;
  for (std::size_t j = 0; j < use.size(); ++j) {
    if (!use[j]) continue;
    for (std::size_t i = 0; i < m; ++i) column[i] = curves[i].values[j];
    pointwise_ranks(column, sidedness, ranks);
    for (std::size_t i = 0; i < m; ++i) rank_vectors[i].push_back(ranks[i]);
  }
  for (auto& v : rank_vectors) std::sort(v.begin(), v.end());

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rank_vectors[a] < rank_vectors[b];
  });
  std::vector<double> position(m);
  for (std::size_t pos = 0; pos < m;) {
    std::size_t end = pos;
    while (end < m && rank_vectors[order[end]] == rank_vectors[order[pos]]) ++end;
    for (std::size_t q = pos; q < end; ++q) position[order[q]] = static_cast<double>(pos + 1);
    pos = end;
  }
  return position;
}

double mc_p_value(double observed_score, std::span<const double> bootstrap_scores,
                  Ordering ordering) {
  std::size_t at_least = 0;
  for (double s : bootstrap_scores) {
    const bool extreme = ordering == Ordering::Integral ? s >= observed_score : s <= observed_score;
    if (extreme) ++at_least;
  }
  return (1.0 + static_cast<double>(at_least)) / (static_cast<double>(bootstrap_scores.size()) + 1.0);
}

CurveStatistic compute_statistic(const FryPattern& fry, const EstimatorContext& ctx,
                                 const TestConfig& cfg, EstimatorWarnings* warnings) {
  const auto grid = uniform_grid(cfg.r_max, cfg.k);
  if (const auto* sc = std::get_if<SectorContrastSpec>(&cfg.statistic)) {
    return sector_contrast_curve(fry, ctx, sc->alpha1, sc->alpha2, sc->eps, grid, warnings);
  }
  return wong_chiu_curve(fry, ctx, grid, std::get<WongChiuSpec>(cfg.statistic).grid, warnings);
}

TestResult score_curves(std::span<const CurveStatistic> curves, const TestConfig& cfg) {
  TestResult result;
  result.ordering = cfg.ordering;
  const auto use = common_support(curves);
  const auto n_missing = static_cast<std::size_t>(std::count(use.begin(), use.end(), 0));
  if (n_missing > 0) {
    result.warnings.push_back("excluded " + std::to_string(n_missing) +
                              " grid point(s) missing in at least one curve");
  }

  std::vector<double> scores(curves.size());
  if (cfg.ordering == Ordering::Integral) {
    for (std::size_t i = 0; i < curves.size(); ++i) scores[i] = integral_extremeness(curves[i], use);
  } else {
    scores = erl_order(curves, sidedness_of(cfg.statistic));
  }
  result.observed_score = scores[0];
  result.bootstrap_scores.assign(scores.begin() + 1, scores.end());
  result.p_value = mc_p_value(result.observed_score, result.bootstrap_scores, cfg.ordering);
  return result;
}

TestResult isotropy_test_fry(const FryPattern& observed, const FryPattern& base,
                             const EstimatorContext& ctx, const TestConfig& cfg) {
  cfg.validate();
  const auto M = static_cast<std::size_t>(cfg.M);
  std::vector<CurveStatistic> curves(M + 1);
  std::vector<EstimatorWarnings> tallies(M + 1);
  curves[0] = compute_statistic(observed, ctx, cfg, &tallies[0]);
  parallel_for(M, cfg.threads, [&](std::size_t b) {
    RngStream rng(cfg.seed, b + 1);
    const FryPattern rotated = resample(base, cfg.scheme, rng);
    curves[b + 1] = compute_statistic(rotated, ctx, cfg, &tallies[b + 1]);
  });

  TestResult result = score_curves(curves, cfg);
  std::size_t zero_weight = 0;
  for (const auto& t : tallies) zero_weight += t.zero_weight_vectors;
  if (zero_weight > 0) {
    result.warnings.push_back("dropped " + std::to_string(zero_weight) +
                              " zero-weight Fry vector(s)");
  }
  return result;
}

TestResult isotropy_test(const PointPattern& pattern, const TestConfig& cfg) {
  cfg.validate();
  if (pattern.size() < 2) throw DataError("isotropy test needs at least two points");
  const auto ctx = EstimatorContext::from(pattern.window, pattern.size());
  // Rotations preserve norms, so clipping before resampling changes nothing.
  const FryPattern fry = fry_points(pattern, cfg.r_max);
  return isotropy_test_fry(fry, fry, ctx, cfg);
}

}  // namespace fryiso
