// fryiso: command-line front end for the Fry-rotation isotropy test.
//
//   fryiso simulate --config model.cfg --seed 1 --out pattern.csv
//   fryiso fry      --pattern pattern.csv [--r-max 13] [--scheme groupwise] --out fry.csv
//   fryiso test     --pattern pattern.csv --config test.cfg --out result.csv
//   fryiso power    --config study.cfg --threads 8 --out power.csv
//   fryiso battery  --pattern amacrine.csv --config battery.cfg --out table.csv
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 1 anything else.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fryiso/config.hpp"
#include "fryiso/errors.hpp"
#include "fryiso/fry.hpp"
#include "fryiso/io.hpp"
#include "fryiso/mctest.hpp"
#include "fryiso/models.hpp"
#include "fryiso/study.hpp"

namespace {

using namespace fryiso;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  std::vector<double> window;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--seed", o.seed, "Master seed (default 0)");
  cmd->add_option("--threads", o.threads, "Worker threads (default 1)")->check(CLI::PositiveNumber);
  cmd->add_option("--config", o.config_path, "Key-value config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_path, "Output path (default stdout)");
  cmd->add_option("--set", o.overrides, "Config override key=value (repeatable)");
}

KeyValueConfig load_config(const CommonOptions& o) {
  KeyValueConfig kv = o.config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(o.config_path);
  for (const auto& a : o.overrides) kv.set_assignment(a);
  if (o.seed) kv.set("seed", std::to_string(*o.seed));
  if (o.threads) kv.set("threads", std::to_string(*o.threads));
  return kv;
}

std::optional<Window> window_option(const std::vector<double>& w) {
  if (w.empty()) return std::nullopt;
  if (w.size() != 4) throw ConfigError("--window expects x_min x_max y_min y_max");
  return Window(w[0], w[1], w[2], w[3]);
}

// Writes through `emit` to --out or stdout.
template <class Emit>
void write_output(const std::string& path, Emit emit) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  emit(out);
}

ModelConfig model_from(const KeyValueConfig& kv) {
  ModelConfig m;
  if (!kv.has("model.family")) throw ConfigError("model.family is required");
  m.family = parse_family(*kv.get("model.family"));
  m.R = kv.get_double_or("model.R", m.R);
  m.gamma = kv.get_double_or("model.gamma", m.gamma);
  m.a = kv.get_double_or("model.a", m.a);
  m.n_target = static_cast<int>(kv.get_int_or("model.n", m.n_target));
  m.p = kv.get_double_or("model.p", m.p);
  m.mu = kv.get_double_or("model.mu", m.mu);
  m.kappa_max = kv.get_double_or("model.kappa_max", m.kappa_max);
  m.tau = kv.get_double_or("model.tau", m.tau);
  m.validate();
  return m;
}

int run_simulate(const CommonOptions& o) {
  const auto kv = load_config(o);
  const ModelConfig model = model_from(kv);
  Window window = table1_window(model.n_target, kv.get_double_or("model.intensity", 0.005));
  if (kv.has("model.window")) {
    const auto w = kv.get_double_list("model.window");
    if (w.size() != 4) throw ConfigError("model.window expects x_min,x_max,y_min,y_max");
    window = Window(w[0], w[1], w[2], w[3]);
  }
  if (auto w = window_option(o.window)) window = *w;
  RngStream rng(kv.get_u64("seed").value_or(0), 0);
  const PointPattern pattern = simulate(model, window, rng);
  write_output(o.out_path, [&](std::ostream& out) { write_pattern(out, pattern); });
  return 0;
}

int run_fry(const CommonOptions& o, const std::string& pattern_path,
            const std::optional<double>& r_max, const std::string& scheme) {
  const auto kv = load_config(o);
  const PointPattern pattern = read_pattern(pattern_path, window_option(o.window));
  FryPattern fry = fry_points(pattern, r_max);
  if (!scheme.empty()) {
    RngStream rng(kv.get_u64("seed").value_or(0), 1);
    fry = resample(fry, parse_scheme(scheme), rng);
  }
  write_output(o.out_path, [&](std::ostream& out) { write_fry(out, fry); });
  return 0;
}

int run_test(const CommonOptions& o, const std::string& pattern_path,
             const std::optional<double>& r_max, const std::string& curve_path) {
  auto kv = load_config(o);
  if (r_max) kv.set("test.r_max", format_number(*r_max));
  if (!kv.has("test.r_max")) throw ConfigError("test.r_max is required (config key or --r-max)");
  const TestConfig cfg = test_config_from(kv);
  const PointPattern pattern = read_pattern(pattern_path, window_option(o.window));
  const TestResult result = isotropy_test(pattern, cfg);
  if (!curve_path.empty()) {
    const auto ctx = EstimatorContext::from(pattern.window, pattern.size());
    const auto curve = compute_statistic(fry_points(pattern, cfg.r_max), ctx, cfg);
    write_output(curve_path, [&](std::ostream& out) { write_curve(out, curve); });
  }
  write_output(o.out_path, [&](std::ostream& out) { write_result(out, result, cfg); });
  return 0;
}

int run_power(const CommonOptions& o) {
  const auto kv = load_config(o);
  const StudyConfig cfg = StudyConfig::from(kv);
  const PowerTable table = run_power_study(cfg);
  write_output(o.out_path, [&](std::ostream& out) { table.write_csv(out); });
  return 0;
}

int run_battery(const CommonOptions& o, const std::string& pattern_path) {
  const auto kv = load_config(o);
  const BatteryConfig cfg = BatteryConfig::from(kv);
  const PointPattern pattern = read_pattern(pattern_path, window_option(o.window));
  const auto rows = run_real_data_battery(pattern, cfg);
  write_output(o.out_path, [&](std::ostream& out) { write_battery_csv(out, rows); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonparametric isotropy tests for planar point patterns by random rotation of Fry points"};
  app.require_subcommand(1);

  CommonOptions sim_opts, fry_opts, test_opts, power_opts, battery_opts;
  std::string fry_pattern, test_pattern, battery_pattern, fry_scheme, curve_path;
  std::optional<double> fry_rmax, test_rmax;

  auto* sim = app.add_subcommand("simulate", "Simulate a model realization to pattern CSV");
  add_common(sim, sim_opts);
  sim->add_option("--window", sim_opts.window, "Window x_min x_max y_min y_max")->expected(4);

  auto* fry = app.add_subcommand("fry", "Write the Fry points of a pattern CSV");
  add_common(fry, fry_opts);
  fry->add_option("--pattern", fry_pattern, "Pattern CSV")->required();
  fry->add_option("--r-max", fry_rmax, "Drop vectors longer than this");
  fry->add_option("--scheme", fry_scheme, "Apply one random rotation (individual|pairwise|groupwise)");
  fry->add_option("--window", fry_opts.window, "Window x_min x_max y_min y_max")->expected(4);

  auto* test = app.add_subcommand("test", "Run the isotropy test on a pattern CSV");
  add_common(test, test_opts);
  test->add_option("--pattern", test_pattern, "Pattern CSV")->required();
  test->add_option("--r-max", test_rmax, "Upper bound of the radius grid");
  test->add_option("--curve", curve_path, "Also write the observed statistic curve (r,value)");
  test->add_option("--window", test_opts.window, "Window x_min x_max y_min y_max")->expected(4);

  auto* power = app.add_subcommand("power", "Run a power study and write the power table");
  add_common(power, power_opts);

  auto* battery = app.add_subcommand("battery", "Repeated tests on a marked real-data pattern");
  add_common(battery, battery_opts);
  battery->add_option("--pattern", battery_pattern, "Pattern CSV with marks")->required();
  battery->add_option("--window", battery_opts.window, "Window x_min x_max y_min y_max")->expected(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) return run_simulate(sim_opts);
    if (*fry) return run_fry(fry_opts, fry_pattern, fry_rmax, fry_scheme);
    if (*test) return run_test(test_opts, test_pattern, test_rmax, curve_path);
    if (*power) return run_power(power_opts);
    if (*battery) return run_battery(battery_opts, battery_pattern);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
