#include "fryiso/fry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "fryiso/errors.hpp"

namespace fryiso {

namespace {

// Position of x_j - x_i in the unclipped enumeration.
std::size_t ordinal_of(std::size_t i, std::size_t j, std::size_t n) {
  return i * (n - 1) + (j < i ? j : j - 1);
}

}  // namespace

FryPattern fry_points(const PointPattern& pattern, std::optional<double> r_max) {
  const std::size_t n = pattern.size();
  if (n < 2) throw DataError("Fry points need at least two points");
  FryPattern fry;
  fry.source_n = n;
  fry.window = pattern.window;
  const std::size_t full = n * (n - 1);
  if (!r_max) {
    fry.vectors.reserve(full);
    fry.group_of.reserve(full);
    fry.pair_of.reserve(full);
    fry.ordinal.reserve(full);
  }
  const double limit2 = r_max ? (*r_max) * (*r_max) : 0.0;

  // First pass: record kept vectors and a map from ordinal to stored index.
  std::vector<std::size_t> index_of;
  if (r_max) index_of.assign(full, kNoPartner);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Vec2 z = pattern.points[j] - pattern.points[i];
      if (r_max && z.norm2() > limit2) continue;
      const std::size_t ord = ordinal_of(i, j, n);
      if (r_max) index_of[ord] = fry.vectors.size();
      fry.vectors.push_back(z);
      fry.group_of.push_back(i);
      fry.ordinal.push_back(ord);
    }
  }
  fry.pair_of.resize(fry.vectors.size());
  for (std::size_t k = 0; k < fry.vectors.size(); ++k) {
    const std::size_t ord = fry.ordinal[k];
    const std::size_t i = fry.group_of[k];
    const std::size_t jj = ord % (n - 1);
    const std::size_t j = jj < i ? jj : jj + 1;
    const std::size_t partner_ord = ordinal_of(j, i, n);
    fry.pair_of[k] = r_max ? index_of[partner_ord] : partner_ord;
  }
  return fry;
}

FryPattern clip(const FryPattern& fry, double r_max) {
  FryPattern out;
  out.source_n = fry.source_n;
  out.window = fry.window;
  out.pairs_valid = fry.pairs_valid;
  std::vector<std::size_t> new_index(fry.size(), kNoPartner);
  const double limit2 = r_max * r_max;
  for (std::size_t k = 0; k < fry.size(); ++k) {
    if (fry.vectors[k].norm2() > limit2) continue;
    new_index[k] = out.vectors.size();
    out.vectors.push_back(fry.vectors[k]);
    out.group_of.push_back(fry.group_of[k]);
    out.ordinal.push_back(fry.ordinal[k]);
  }
  out.pair_of.reserve(out.vectors.size());
  for (std::size_t k = 0; k < fry.size(); ++k) {
    if (new_index[k] == kNoPartner) continue;
    const std::size_t p = fry.pair_of[k];
    out.pair_of.push_back(p == kNoPartner ? kNoPartner : new_index[p]);
  }
  return out;
}

std::string_view to_string(RotationScheme scheme) {
  switch (scheme) {
    case RotationScheme::Individual: return "individual";
    case RotationScheme::Pairwise: return "pairwise";
    case RotationScheme::GroupWise: return "groupwise";
  }
  return "unknown";
}

RotationScheme parse_scheme(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::erase(s, '-');
  std::erase(s, '_');
  if (s == "individual") return RotationScheme::Individual;
  if (s == "pairwise" || s == "pair") return RotationScheme::Pairwise;
  if (s == "groupwise" || s == "group") return RotationScheme::GroupWise;
  throw ConfigError("unknown rotation scheme '" + std::string(name) + "'");
}

FryPattern resample(const FryPattern& fry, RotationScheme scheme,
                    const std::function<double()>& next_angle) {
  const std::size_t n = fry.source_n;
  FryPattern out = fry;
  switch (scheme) {
    case RotationScheme::Individual: {
      // Walk the full enumeration so clipped and unclipped inputs consume the
      // same draws.
      std::size_t k = 0;
      for (std::size_t ord = 0; ord < fry.full_size(); ++ord) {
        const double phi = next_angle();
        if (k < fry.size() && fry.ordinal[k] == ord) {
          out.vectors[k] = rotate(fry.vectors[k], phi);
          ++k;
        }
      }
      out.pairs_valid = false;
      break;
    }
    case RotationScheme::Pairwise: {
      if (!fry.pairs_valid) throw DataError("pairwise rotation needs intact pair links");
      for (std::size_t k = 0; k < fry.size(); ++k) {
        const std::size_t p = fry.pair_of[k];
        if (p == kNoPartner || p >= fry.size() || fry.pair_of[p] != k) {
          throw DataError("pairwise rotation needs intact pair links");
        }
      }
      // Unordered pair {i < j} has rank i(2n - i - 1)/2 + (j - i - 1).
      const std::size_t n_pairs = fry.full_size() / 2;
      std::vector<double> cos_a(n_pairs), sin_a(n_pairs);
      for (std::size_t q = 0; q < n_pairs; ++q) {
        const double phi = next_angle();
        cos_a[q] = std::cos(phi);
        sin_a[q] = std::sin(phi);
      }
      for (std::size_t k = 0; k < fry.size(); ++k) {
        const std::size_t i = fry.group_of[k];
        const std::size_t jj = fry.ordinal[k] % (n - 1);
        const std::size_t j = jj < i ? jj : jj + 1;
        const std::size_t lo = std::min(i, j);
        const std::size_t hi = std::max(i, j);
        const std::size_t q = lo * (2 * n - lo - 1) / 2 + (hi - lo - 1);
        out.vectors[k] = rotate(fry.vectors[k], cos_a[q], sin_a[q]);
      }
      break;
    }
    case RotationScheme::GroupWise: {
      std::size_t k = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double phi = next_angle();
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        for (; k < fry.size() && fry.group_of[k] == i; ++k) {
          out.vectors[k] = rotate(fry.vectors[k], c, s);
        }
      }
      out.pairs_valid = false;
      break;
    }
  }
  return out;
}

FryPattern resample(const FryPattern& fry, RotationScheme scheme, RngStream& rng) {
  return resample(fry, scheme, [&rng] { return uniform_angle(rng); });
}

}  // namespace fryiso
