#pragma once

// CSV formats:
//   pattern: "# window x_min x_max y_min y_max" comment, header "x,y[,mark]"
//   fry:     header "dx,dy,group"
//   curve:   header "r,value"
//   result:  header "p_value,ordering,scheme,statistic,r_max,M,seed,warnings"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fryiso/estimators.hpp"
#include "fryiso/fry.hpp"
#include "fryiso/mctest.hpp"
#include "fryiso/models.hpp"

namespace fryiso {

/// Shortest round-trip decimal (fixed) notation; "NA" for NaN.
std::string format_number(double v);

/// Parses a pattern CSV. The window comes from `window_override` if given,
/// otherwise from the "# window" comment. Throws DataError with the offending
/// line number on malformed input, and lists points outside the window.
PointPattern read_pattern(std::istream& in, std::optional<Window> window_override = std::nullopt);
PointPattern read_pattern(const std::filesystem::path& path,
                          std::optional<Window> window_override = std::nullopt);

void write_pattern(std::ostream& out, const PointPattern& pattern);
void write_pattern(const std::filesystem::path& path, const PointPattern& pattern);

void write_fry(std::ostream& out, const FryPattern& fry);
void write_curve(std::ostream& out, const CurveStatistic& curve);

/// One header line and one data row. Warnings are joined with ';' and quoted.
void write_result(std::ostream& out, const TestResult& result, const TestConfig& cfg);

}  // namespace fryiso
