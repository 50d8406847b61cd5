#include "fryiso/study.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fryiso/errors.hpp"
#include "fryiso/fry.hpp"
#include "fryiso/io.hpp"
#include "fryiso/parallel.hpp"

namespace fryiso {

namespace {

struct Moments {
  double mean{0.0};
  double sd{0.0};
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return {std::nan(""), std::nan("")};
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) {
    m.sd = std::nan("");
    return m;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

template <class T, class Parse>
std::vector<T> parse_list(const KeyValueConfig& kv, const std::string& key, Parse parse) {
  std::vector<T> out;
  for (const auto& item : kv.get_list(key)) out.push_back(parse(item));
  return out;
}

int to_int(const std::string& key, double v) {
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(v);
}

}  // namespace

double default_r_max(const ModelConfig& model, double r_scale, double line_offset) {
  if (model.family == ModelFamily::PoissonLineCluster) return model.R + line_offset;
  return r_scale * model.R;
}

SectorContrastSpec default_contrast(const ModelConfig& model, double eps) {
  switch (model.family) {
    case ModelFamily::Strauss:
    case ModelFamily::ThomasLike: return {0.0, 0.5 * kPi, eps};
    case ModelFamily::PoissonLineCluster:
    case ModelFamily::MaternLikeElliptical: return {model.mu, model.mu + 0.5 * kPi, eps};
  }
  return {0.0, 0.5 * kPi, eps};
}

TestConfig test_config_from(const KeyValueConfig& kv, const TestConfig& defaults) {
  TestConfig cfg = defaults;
  const std::string statistic = kv.get_or("test.statistic", std::string(statistic_name(cfg.statistic)));
  if (statistic == "sector_contrast" || statistic == "sector") {
    SectorContrastSpec spec = std::holds_alternative<SectorContrastSpec>(cfg.statistic)
                                  ? std::get<SectorContrastSpec>(cfg.statistic)
                                  : SectorContrastSpec{};
    spec.alpha1 = kv.get_double_or("test.alpha1", spec.alpha1);
    spec.alpha2 = kv.get_double_or("test.alpha2", spec.alpha2);
    spec.eps = kv.get_double_or("test.eps", spec.eps);
    cfg.statistic = spec;
  } else if (statistic == "wong_chiu" || statistic == "wongchiu") {
    WongChiuSpec spec;
    if (kv.has("test.wc.alphas")) spec.grid.alphas = kv.get_double_list("test.wc.alphas");
    if (kv.has("test.wc.epsilons")) spec.grid.epsilons = kv.get_double_list("test.wc.epsilons");
    cfg.statistic = spec;
  } else {
    throw ConfigError("test.statistic: unknown statistic '" + statistic + "'");
  }
  if (auto v = kv.get("test.ordering")) cfg.ordering = parse_ordering(*v);
  if (auto v = kv.get("test.scheme")) cfg.scheme = parse_scheme(*v);
  cfg.M = static_cast<int>(kv.get_int_or("test.M", cfg.M));
  cfg.k = static_cast<int>(kv.get_int_or("test.k", cfg.k));
  cfg.r_max = kv.get_double_or("test.r_max", cfg.r_max);
  cfg.significance = kv.get_double_or("test.significance", cfg.significance);
  if (auto s = kv.get_u64("seed")) cfg.seed = *s;
  cfg.threads = static_cast<int>(kv.get_int_or("threads", cfg.threads));
  return cfg;
}

FamilyGrid table1_grid(ModelFamily family) {
  const std::vector<int> n{100, 300, 500};
  const std::vector<double> a{0.7, 1.0};
  switch (family) {
    case ModelFamily::Strauss: return {{5, 10}, {0.0, 0.4, 0.8}, a, n};
    case ModelFamily::ThomasLike: return {{10, 20}, {0.05, 0.15, 0.25}, a, n};
    case ModelFamily::PoissonLineCluster: return {{0, 1}, {0.0, 0.4, 0.8}, a, n};
    case ModelFamily::MaternLikeElliptical: return {{10, 20}, {0.05, 0.15, 0.25}, a, n};
  }
  return {};
}

StudyConfig StudyConfig::from(const KeyValueConfig& kv) {
  StudyConfig cfg;
  if (kv.has("model.family")) {
    cfg.families = parse_list<ModelFamily>(kv, "model.family", [](const std::string& s) {
      return parse_family(s);
    });
  }
  cfg.R = kv.get_double_list("model.R");
  cfg.gamma = kv.get_double_list("model.gamma");
  cfg.a = kv.get_double_list("model.a");
  for (double v : kv.get_double_list("model.n")) cfg.n.push_back(to_int("model.n", v));
  cfg.intensity = kv.get_double_or("model.intensity", cfg.intensity);
  cfg.p = kv.get_double_or("model.p", cfg.p);
  cfg.mu = kv.get_double_or("model.mu", cfg.mu);
  cfg.kappa_max = kv.get_double_or("model.kappa_max", cfg.kappa_max);
  cfg.tau = kv.get_double_or("model.tau", cfg.tau);

  cfg.replicates = static_cast<int>(kv.get_int_or("study.replicates", cfg.replicates));
  if (kv.has("test.scheme")) {
    cfg.schemes = parse_list<RotationScheme>(kv, "test.scheme", [](const std::string& s) {
      return parse_scheme(s);
    });
  }
  if (kv.has("test.ordering")) {
    cfg.orderings = parse_list<Ordering>(kv, "test.ordering", [](const std::string& s) {
      return parse_ordering(s);
    });
  }
  const std::string statistic = kv.get_or("test.statistic", "sector_contrast");
  if (statistic == "wong_chiu" || statistic == "wongchiu") {
    cfg.wong_chiu = true;
  } else if (statistic != "sector_contrast" && statistic != "sector") {
    throw ConfigError("test.statistic: unknown statistic '" + statistic + "'");
  }
  cfg.eps = kv.get_double_or("test.eps", cfg.eps);
  cfg.alpha1 = kv.get_double("test.alpha1");
  cfg.alpha2 = kv.get_double("test.alpha2");
  cfg.r_max = kv.get_double("test.r_max");
  cfg.r_scale = kv.get_double_or("test.r_scale", cfg.r_scale);
  cfg.line_r_offset = kv.get_double_or("test.line_r_offset", cfg.line_r_offset);
  cfg.M = static_cast<int>(kv.get_int_or("test.M", cfg.M));
  cfg.k = static_cast<int>(kv.get_int_or("test.k", cfg.k));
  cfg.significance = kv.get_double_or("test.significance", cfg.significance);
  if (auto s = kv.get_u64("seed")) cfg.seed = *s;
  cfg.threads = static_cast<int>(kv.get_int_or("threads", cfg.threads));
  cfg.validate();
  return cfg;
}

void StudyConfig::validate() const {
  if (families.empty()) throw ConfigError("model.family: at least one family required");
  if (replicates < 1) throw ConfigError("study.replicates must be >= 1");
  if (schemes.empty() || orderings.empty()) throw ConfigError("need at least one scheme and ordering");
  if (!(intensity > 0.0)) throw ConfigError("model.intensity must be > 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  for (const auto& cell : cells()) {
    cell.validate();
    for (auto s : schemes) {
      for (auto o : orderings) test_config(cell, s, o).validate();
    }
  }
}

std::vector<ModelConfig> StudyConfig::cells() const {
  std::vector<ModelConfig> out;
  for (auto family : families) {
    const FamilyGrid g = table1_grid(family);
    const auto& Rs = R.empty() ? g.R : R;
    const auto& gammas = gamma.empty() ? g.gamma : gamma;
    const auto& as = a.empty() ? g.a : a;
    const auto& ns = n.empty() ? g.n : n;
    for (double r : Rs) {
      for (double gm : gammas) {
        for (double aa : as) {
          for (int nn : ns) {
            ModelConfig m;
            m.family = family;
            m.R = r;
            m.gamma = gm;
            m.a = aa;
            m.n_target = nn;
            m.p = p;
            m.mu = mu;
            m.kappa_max = kappa_max;
            m.tau = tau;
            out.push_back(m);
          }
        }
      }
    }
  }
  return out;
}

TestConfig StudyConfig::test_config(const ModelConfig& model, RotationScheme scheme,
                                    Ordering ordering) const {
  TestConfig tc;
  if (wong_chiu) {
    tc.statistic = WongChiuSpec{};
  } else {
    SectorContrastSpec spec = default_contrast(model, eps);
    if (alpha1) spec.alpha1 = *alpha1;
    if (alpha2) spec.alpha2 = *alpha2;
    tc.statistic = spec;
  }
  tc.ordering = ordering;
  tc.scheme = scheme;
  tc.M = M;
  tc.k = k;
  tc.r_max = r_max ? *r_max : default_r_max(model, r_scale, line_r_offset);
  tc.significance = significance;
  tc.threads = 1;
  return tc;
}

void PowerTable::write_csv(std::ostream& out) const {
  out << "family,R,gamma,a,n,scheme,ordering,statistic,r_max,replicates,failures,"
         "rejection_rate,se,mean_p,sd_p\n";
  for (const auto& row : rows) {
    out << to_string(row.model.family) << ',' << format_number(row.model.R) << ','
        << format_number(row.model.gamma) << ',' << format_number(row.model.a) << ','
        << row.model.n_target << ',' << to_string(row.scheme) << ',' << to_string(row.ordering)
        << ',' << row.statistic << ',' << format_number(row.r_max) << ',' << row.replicates << ','
        << row.failures << ',';
    if (row.skipped) {
      out << "NA,NA,NA,NA\n";
    } else {
      out << format_number(row.rejection_rate) << ',' << format_number(row.standard_error) << ','
          << format_number(row.mean_p) << ',' << format_number(row.sd_p) << '\n';
    }
  }
}

PowerTable run_power_study(const StudyConfig& cfg) {
  cfg.validate();
  const auto cells = cfg.cells();
  struct Variant {
    RotationScheme scheme;
    Ordering ordering;
  };
  std::vector<Variant> variants;
  for (auto s : cfg.schemes) {
    for (auto o : cfg.orderings) variants.push_back({s, o});
  }
  const auto reps = static_cast<std::size_t>(cfg.replicates);
  const std::size_t nv = variants.size();
  // p[(c * reps + r) * nv + v]; NaN marks a failed replicate.
  std::vector<double> p(cells.size() * reps * nv, std::nan(""));

  parallel_for(cells.size() * reps, cfg.threads, [&](std::size_t task) {
    const std::size_t c = task / reps;
    const std::size_t r = task % reps;
    const ModelConfig& model = cells[c];
    const std::uint64_t rep_seed = derive_seed(cfg.seed, c, r);
    try {
      RngStream sim_rng(rep_seed, 0);
      const Window window = table1_window(model.n_target, cfg.intensity);
      const PointPattern pattern = simulate(model, window, sim_rng);
      if (pattern.size() < 2) return;
      const auto ctx = EstimatorContext::from(pattern.window, pattern.size());
      const double r_max = cfg.test_config(model, variants[0].scheme, variants[0].ordering).r_max;
      const FryPattern fry = fry_points(pattern, r_max);
      for (std::size_t v = 0; v < nv; ++v) {
        TestConfig tc = cfg.test_config(model, variants[v].scheme, variants[v].ordering);
        tc.seed = derive_seed(rep_seed, v + 1);
        p[task * nv + v] = isotropy_test_fry(fry, fry, ctx, tc).p_value;
      }
    } catch (const SimulationError&) {
    } catch (const DataError&) {
    }
  });

  PowerTable table;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t v = 0; v < nv; ++v) {
      const TestConfig tc = cfg.test_config(cells[c], variants[v].scheme, variants[v].ordering);
      std::vector<double> ps;
      int rejections = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double pv = p[(c * reps + r) * nv + v];
        if (std::isnan(pv)) continue;
        ps.push_back(pv);
        if (pv <= cfg.significance) ++rejections;
      }
      PowerRow row{};
      row.model = cells[c];
      row.scheme = variants[v].scheme;
      row.ordering = variants[v].ordering;
      row.statistic = std::string(statistic_name(tc.statistic));
      row.r_max = tc.r_max;
      row.replicates = cfg.replicates;
      row.failures = cfg.replicates - static_cast<int>(ps.size());
      row.skipped = row.failures > 0.01 * cfg.replicates || ps.empty();
      if (!row.skipped) {
        const double rate = static_cast<double>(rejections) / static_cast<double>(ps.size());
        const auto m = moments(ps);
        row.rejection_rate = rate;
        row.standard_error = std::sqrt(rate * (1.0 - rate) / static_cast<double>(ps.size()));
        row.mean_p = m.mean;
        row.sd_p = m.sd;
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

std::vector<BatterySubset> BatteryConfig::amacrine_subsets() {
  const double deg = kPi / 180.0;
  return {{"unmarked", std::nullopt, -45 * deg, 45 * deg},
          {"on", std::string("on"), -10 * deg, 80 * deg},
          {"off", std::string("off"), 60 * deg, 150 * deg}};
}

BatteryConfig BatteryConfig::from(const KeyValueConfig& kv) {
  BatteryConfig cfg;
  const auto defaults = amacrine_subsets();
  std::vector<std::string> names = kv.get_list("battery.subsets");
  if (names.empty()) names = {"unmarked", "on", "off"};
  for (const auto& name : names) {
    BatterySubset s{name, name == "unmarked" ? std::nullopt : std::optional<std::string>(name), 0.0,
                    0.5 * kPi};
    for (const auto& d : defaults) {
      if (d.name == name) s = d;
    }
    s.alpha1 = kv.get_double_or("battery." + name + ".alpha1", s.alpha1);
    s.alpha2 = kv.get_double_or("battery." + name + ".alpha2", s.alpha2);
    cfg.subsets.push_back(s);
  }
  if (kv.has("battery.r_max")) cfg.r_max_values = kv.get_double_list("battery.r_max");
  if (kv.has("battery.M")) {
    cfg.M_values.clear();
    for (double v : kv.get_double_list("battery.M")) cfg.M_values.push_back(to_int("battery.M", v));
  }
  if (kv.has("battery.ordering")) {
    cfg.orderings = parse_list<Ordering>(kv, "battery.ordering", [](const std::string& s) {
      return parse_ordering(s);
    });
  }
  cfg.repeats = static_cast<int>(kv.get_int_or("battery.repeats", cfg.repeats));
  cfg.eps = kv.get_double_or("test.eps", cfg.eps);
  cfg.k = static_cast<int>(kv.get_int_or("test.k", cfg.k));
  if (auto s = kv.get_u64("seed")) cfg.seed = *s;
  cfg.threads = static_cast<int>(kv.get_int_or("threads", cfg.threads));
  if (cfg.repeats < 1) throw ConfigError("battery.repeats must be >= 1");
  return cfg;
}

std::vector<BatteryRow> run_real_data_battery(const PointPattern& pattern, const BatteryConfig& cfg) {
  if (cfg.subsets.empty() || cfg.r_max_values.empty() || cfg.M_values.empty() ||
      cfg.orderings.empty()) {
    throw ConfigError("battery needs subsets, r_max values, M values and orderings");
  }
  if (cfg.repeats < 1) throw ConfigError("battery.repeats must be >= 1");

  struct Prepared {
    PointPattern points;
    EstimatorContext ctx;
    std::vector<FryPattern> fry_by_rmax;
  };
  std::vector<Prepared> prepared;
  for (const auto& s : cfg.subsets) {
    PointPattern sub = s.mark ? pattern.subset_by_mark(*s.mark) : PointPattern{pattern.points, pattern.window, {}};
    if (sub.size() < 2) {
      throw DataError("subset '" + s.name + "' has fewer than two points");
    }
    const auto ctx = EstimatorContext::from(sub.window, sub.size());
    std::vector<FryPattern> frys;
    for (double r : cfg.r_max_values) frys.push_back(fry_points(sub, r));
    prepared.push_back({std::move(sub), ctx, std::move(frys)});
  }

  struct RowSpec {
    std::size_t subset;
    Ordering ordering;
    int M;
    std::size_t r_index;
  };
  std::vector<RowSpec> specs;
  for (std::size_t s = 0; s < cfg.subsets.size(); ++s) {
    for (auto o : cfg.orderings) {
      for (int M : cfg.M_values) {
        for (std::size_t ri = 0; ri < cfg.r_max_values.size(); ++ri) specs.push_back({s, o, M, ri});
      }
    }
  }

  const auto reps = static_cast<std::size_t>(cfg.repeats);
  std::vector<double> p(specs.size() * reps);
  parallel_for(specs.size() * reps, cfg.threads, [&](std::size_t task) {
    const auto& spec = specs[task / reps];
    const auto& subset = cfg.subsets[spec.subset];
    TestConfig tc;
    tc.statistic = SectorContrastSpec{subset.alpha1, subset.alpha2, cfg.eps};
    tc.ordering = spec.ordering;
    tc.scheme = RotationScheme::GroupWise;
    tc.M = spec.M;
    tc.r_max = cfg.r_max_values[spec.r_index];
    tc.k = cfg.k;
    tc.significance = std::max(0.05, 1.0 / (spec.M + 1.0));
    tc.seed = derive_seed(cfg.seed, task / reps, task % reps);
    const auto& prep = prepared[spec.subset];
    const auto& fry = prep.fry_by_rmax[spec.r_index];
    p[task] = isotropy_test_fry(fry, fry, prep.ctx, tc).p_value;
  });

  std::vector<BatteryRow> rows;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::vector<double> ps(p.begin() + static_cast<std::ptrdiff_t>(i * reps),
                                 p.begin() + static_cast<std::ptrdiff_t>((i + 1) * reps));
    const auto m = moments(ps);
    rows.push_back({cfg.subsets[specs[i].subset].name, specs[i].ordering, specs[i].M,
                    cfg.r_max_values[specs[i].r_index], cfg.repeats, m.mean, m.sd});
  }
  return rows;
}

void write_battery_csv(std::ostream& out, const std::vector<BatteryRow>& rows) {
  out << "subset,ordering,M,r_max,repeats,mean_p,sd_p\n";
  for (const auto& r : rows) {
    out << r.subset << ',' << to_string(r.ordering) << ',' << r.M << ',' << format_number(r.r_max)
        << ',' << r.repeats << ',' << format_number(r.mean_p) << ',' << format_number(r.sd_p)
        << '\n';
  }
}

}  // namespace fryiso
