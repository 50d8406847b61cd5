#pragma once

// Fry points (all ordered pairwise difference vectors of a pattern) and the
// random-rotation resampling schemes that generate isotropic surrogates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "fryiso/geometry.hpp"
#include "fryiso/models.hpp"
#include "fryiso/sampling.hpp"

namespace fryiso {

inline constexpr std::size_t kNoPartner = static_cast<std::size_t>(-1);

/// Difference vectors z = x_j - x_i with bookkeeping links.
///
/// Vectors are stored in canonical order: group i ascending, then j ascending
/// (j != i). `ordinal[k]` is the position of vector k in the unclipped
/// enumeration, so a clipped pattern still knows where each vector came from.
struct FryPattern {
  std::vector<Vec2> vectors;
  std::vector<std::size_t> group_of;  // origin point index i
  std::vector<std::size_t> pair_of;   // index of the linked -z, or kNoPartner
  std::vector<std::size_t> ordinal;
  std::size_t source_n{0};
  Window window{0.0, 1.0, 0.0, 1.0};
  bool pairs_valid{true};  // false once a non-symmetric rotation has been applied

  std::size_t size() const { return vectors.size(); }
  /// n (n - 1): size of the unclipped set.
  std::size_t full_size() const { return source_n * (source_n > 0 ? source_n - 1 : 0); }
  bool clipped() const { return size() != full_size(); }
};

/// All n(n-1) difference vectors. With r_max, vectors with norm > r_max are
/// dropped (a vector and its negation share a norm, so pairs survive together).
/// Throws DataError for n < 2.
FryPattern fry_points(const PointPattern& pattern, std::optional<double> r_max = std::nullopt);

/// Keep only vectors with norm <= r_max; links are remapped.
FryPattern clip(const FryPattern& fry, double r_max);

enum class RotationScheme { Individual, Pairwise, GroupWise };

std::string_view to_string(RotationScheme scheme);
RotationScheme parse_scheme(std::string_view name);

/// Random rotation resampling.
///
/// Angles are drawn in the order of the unclipped enumeration: Individual
/// draws one per ordered pair, Pairwise one per unordered pair {i < j},
/// GroupWise one per origin point i. Because rotations preserve norms, a
/// pattern pre-clipped at r_max resamples to exactly the clipped version of the
/// unclipped result. Throws DataError for Pairwise on broken pair links.
FryPattern resample(const FryPattern& fry, RotationScheme scheme, RngStream& rng);

/// Same, with an explicit angle source (test hook): called once per draw in
/// the order described above.
FryPattern resample(const FryPattern& fry, RotationScheme scheme,
                    const std::function<double()>& next_angle);

}  // namespace fryiso
