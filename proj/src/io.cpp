#include "fryiso/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fryiso/errors.hpp"

namespace fryiso {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(trim(f));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  std::array<char, 512> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                       std::chars_format::fixed);
  if (ec != std::errc()) {
    const auto [p2, ec2] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), p2);
  }
  return std::string(buf.data(), ptr);
}

PointPattern read_pattern(std::istream& in, std::optional<Window> window_override) {
  std::optional<Window> sidecar;
  bool have_header = false;
  bool with_marks = false;
  std::vector<Vec2> points;
  std::vector<std::string> marks;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw DataError("line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      std::istringstream ss(t.substr(1));
      std::string word;
      ss >> word;
      if (lower(word) == "window") {
        std::array<double, 4> v{};
        std::string tok;
        for (auto& x : v) {
          if (!(ss >> tok) || !parse_double(tok, x)) fail("malformed window comment");
        }
        try {
          sidecar = Window(v[0], v[1], v[2], v[3]);
        } catch (const DomainError& e) {
          fail(e.what());
        }
      }
      continue;
    }
    const auto fields = split_csv(t);
    if (!have_header) {
      std::vector<std::string> names;
      for (const auto& f : fields) names.push_back(lower(f));
      if (names == std::vector<std::string>{"x", "y"}) {
        with_marks = false;
      } else if (names == std::vector<std::string>{"x", "y", "mark"}) {
        with_marks = true;
      } else {
        fail("expected header 'x,y' or 'x,y,mark'");
      }
      have_header = true;
      continue;
    }
    const std::size_t expected = with_marks ? 3 : 2;
    if (fields.size() != expected) {
      fail("expected " + std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
    }
    Vec2 p;
    if (!parse_double(fields[0], p.x) || !parse_double(fields[1], p.y)) {
      fail("cannot parse coordinates '" + fields[0] + "," + fields[1] + "'");
    }
    points.push_back(p);
    if (with_marks) {
      if (fields[2].empty()) fail("empty mark");
      marks.push_back(fields[2]);
    }
  }
  if (!have_header) throw DataError("empty pattern file (no header)");
  const auto window = window_override ? window_override : sidecar;
  if (!window) throw DataError("no observation window: add a '# window' comment or pass one explicitly");
  PointPattern pattern{std::move(points), *window, std::move(marks)};
  pattern.validate();
  return pattern;
}

PointPattern read_pattern(const std::filesystem::path& path, std::optional<Window> window_override) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pattern file " + path.string());
  try {
    return read_pattern(in, window_override);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_pattern(std::ostream& out, const PointPattern& pattern) {
  const auto& w = pattern.window;
  out << "# window " << format_number(w.x_min()) << ' ' << format_number(w.x_max()) << ' '
      << format_number(w.y_min()) << ' ' << format_number(w.y_max()) << '\n';
  out << (pattern.has_marks() ? "x,y,mark\n" : "x,y\n");
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    out << format_number(pattern.points[i].x) << ',' << format_number(pattern.points[i].y);
    if (pattern.has_marks()) out << ',' << pattern.marks[i];
    out << '\n';
  }
}

void write_pattern(const std::filesystem::path& path, const PointPattern& pattern) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_pattern(out, pattern);
}

void write_fry(std::ostream& out, const FryPattern& fry) {
  out << "dx,dy,group\n";
  for (std::size_t k = 0; k < fry.size(); ++k) {
    out << format_number(fry.vectors[k].x) << ',' << format_number(fry.vectors[k].y) << ','
        << fry.group_of[k] << '\n';
  }
}

void write_curve(std::ostream& out, const CurveStatistic& curve) {
  out << "r,value\n";
  for (std::size_t j = 0; j < curve.size(); ++j) {
    out << format_number(curve.r_grid[j]) << ',' << format_number(curve.values[j]) << '\n';
  }
}

void write_result(std::ostream& out, const TestResult& result, const TestConfig& cfg) {
  std::string warnings;
  for (const auto& w : result.warnings) warnings += (warnings.empty() ? "" : ";") + w;
  out << "p_value,ordering,scheme,statistic,r_max,M,seed,warnings\n";
  out << format_number(result.p_value) << ',' << to_string(result.ordering) << ','
      << to_string(cfg.scheme) << ',' << statistic_name(cfg.statistic) << ','
      << format_number(cfg.r_max) << ',' << cfg.M << ',' << cfg.seed << ','
      << csv_quote(warnings) << '\n';
}

}  // namespace fryiso
