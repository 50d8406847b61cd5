#pragma once

// Flat "key = value" configuration text with dotted keys, one entry per line.
// '#' starts a comment. List values are comma separated.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fryiso {

class KeyValueConfig {
 public:
  /// Throws ConfigError naming the source and line on malformed entries.
  static KeyValueConfig parse(std::istream& in, const std::string& source = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  /// Parses "key=value" (used for command-line overrides).
  void set_assignment(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;

  std::optional<double> get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  std::optional<std::uint64_t> get_u64(const std::string& key) const;

  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Parses a real number, accepting the symbolic forms "pi", "pi/2", "2pi/3",
/// "-pi/4" and degree values with a "deg" suffix. Throws ConfigError.
double parse_real(const std::string& text, const std::string& what);

}  // namespace fryiso
