#pragma once

// Batch drivers: power studies over model grids and repeated tests on a fixed
// (real) pattern.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fryiso/config.hpp"
#include "fryiso/mctest.hpp"
#include "fryiso/models.hpp"

namespace fryiso {

/// r_max = r_scale * R, except R + line_offset for line clusters.
double default_r_max(const ModelConfig& model, double r_scale = 1.3, double line_offset = 25.0);

/// Contrast directions: (0, pi/2) for geometric anisotropy, (mu, mu + pi/2)
/// for von Mises families.
SectorContrastSpec default_contrast(const ModelConfig& model, double eps = kPi / 4.0);

/// Builds a TestConfig from "test.*" keys. r_max has no default here.
TestConfig test_config_from(const KeyValueConfig& kv, const TestConfig& defaults = {});

struct StudyConfig {
  std::vector<ModelFamily> families{ModelFamily::Strauss};
  // Empty parameter lists fall back to the full grid for the family.
  std::vector<double> R;
  std::vector<double> gamma;
  std::vector<double> a;
  std::vector<int> n;
  double intensity{0.005};
  double p{0.94};
  double mu{kPi / 3.0};
  double kappa_max{10.0};
  double tau{0.4};

  int replicates{100};
  std::vector<RotationScheme> schemes{RotationScheme::GroupWise};
  std::vector<Ordering> orderings{Ordering::Integral};
  bool wong_chiu{false};
  double eps{kPi / 4.0};
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  std::optional<double> r_max;
  double r_scale{1.3};
  double line_r_offset{25.0};
  int M{99};
  int k{kDefaultGridSize};
  double significance{0.05};
  std::uint64_t seed{0};
  int threads{1};

  static StudyConfig from(const KeyValueConfig& kv);
  void validate() const;

  /// Model cells in enumeration order: family, R, gamma, a, n.
  std::vector<ModelConfig> cells() const;
  /// Test settings for one cell and one (scheme, ordering) variant.
  TestConfig test_config(const ModelConfig& model, RotationScheme scheme, Ordering ordering) const;
};

/// Parameter grid of the simulation study for one family.
struct FamilyGrid {
  std::vector<double> R;
  std::vector<double> gamma;
  std::vector<double> a;
  std::vector<int> n;
};
FamilyGrid table1_grid(ModelFamily family);

struct PowerRow {
  ModelConfig model;
  RotationScheme scheme;
  Ordering ordering;
  std::string statistic;
  double r_max;
  int replicates;
  int failures;
  bool skipped;
  double rejection_rate;
  double standard_error;
  double mean_p;
  double sd_p;
};

struct PowerTable {
  std::vector<PowerRow> rows;
  void write_csv(std::ostream& out) const;
};

/// Simulates every cell `replicates` times and runs each (scheme, ordering)
/// variant on the same realization. Replicate r of cell c uses streams keyed
/// by (seed, c, r), so the table is identical for any thread count.
PowerTable run_power_study(const StudyConfig& cfg);

struct BatterySubset {
  std::string name;
  std::optional<std::string> mark;  // nullopt = all points
  double alpha1;
  double alpha2;
};

struct BatteryConfig {
  std::vector<BatterySubset> subsets;
  std::vector<double> r_max_values{0.08, 0.09, 0.10, 0.11, 0.12};
  std::vector<int> M_values{99, 499};
  std::vector<Ordering> orderings{Ordering::Integral, Ordering::ERL};
  int repeats{1000};
  double eps{kPi / 4.0};
  int k{kDefaultGridSize};
  std::uint64_t seed{0};
  int threads{1};

  /// Unmarked (-45 deg, 45 deg), on (-10 deg, 80 deg), off (60 deg, 150 deg).
  static std::vector<BatterySubset> amacrine_subsets();
  static BatteryConfig from(const KeyValueConfig& kv);
};

struct BatteryRow {
  std::string subset;
  Ordering ordering;
  int M;
  double r_max;
  int repeats;
  double mean_p;
  double sd_p;
};

/// Repeats the group-wise sector-contrast test on each subset and reports
/// mean and standard deviation of the p-values. Throws DataError for subsets
/// with fewer than two points.
std::vector<BatteryRow> run_real_data_battery(const PointPattern& pattern, const BatteryConfig& cfg);

void write_battery_csv(std::ostream& out, const std::vector<BatteryRow>& rows);

}  // namespace fryiso
