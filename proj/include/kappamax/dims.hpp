#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "kappamax/errors.hpp"

namespace kappamax {

/// Cell count type. Counts, margins, and disagreement sums are all integers;
/// 64 bits keep cross products like N * sum(u * n_i * n_j) exact at desk scale.
using Count = std::int64_t;

/// Flat cell index into the dense rater-1-slowest layout.
using CellIndex = std::uint32_t;

/// Shape of a contingency table: r raters, each rating on {1, ..., k}.
struct Dims {
  int raters = 0;
  int levels = 0;

  friend bool operator==(const Dims&, const Dims&) = default;

  /// k^r. Valid Dims are constructed through checked(), so this cannot overflow.
  std::int64_t cell_count() const {
    std::int64_t n = 1;
    for (int a = 0; a < raters; ++a) n *= levels;
    return n;
  }

  static Dims checked(int raters, int levels) {
    if (raters < 2) throw DimensionError("need at least 2 raters");
    if (levels < 2) throw DimensionError("need at least 2 levels");
    std::int64_t n = 1;
    for (int a = 0; a < raters; ++a) {
      n *= levels;
      if (n > (std::int64_t{1} << 31)) {
        throw DimensionError("table too large: " + std::to_string(levels) +
                             "^" + std::to_string(raters) + " cells");
      }
    }
    return Dims{raters, levels};
  }
};

/// Coordinate of `flat` along `axis` (0-based, axis 0 varies slowest).
inline int cell_coord(const Dims& d, CellIndex flat, int axis) {
  std::int64_t stride = 1;
  for (int a = axis + 1; a < d.raters; ++a) stride *= d.levels;
  return static_cast<int>((flat / stride) % d.levels);
}

inline void unflatten(const Dims& d, CellIndex flat, std::span<int> out) {
  std::int64_t rest = flat;
  for (int a = d.raters - 1; a >= 0; --a) {
    out[a] = static_cast<int>(rest % d.levels);
    rest /= d.levels;
  }
}

inline CellIndex flatten(const Dims& d, std::span<const int> cell) {
  if (static_cast<int>(cell.size()) != d.raters) {
    throw DimensionError("cell index has wrong arity");
  }
  std::int64_t flat = 0;
  for (int a = 0; a < d.raters; ++a) {
    if (cell[a] < 0 || cell[a] >= d.levels) {
      throw DimensionError("cell coordinate out of range");
    }
    flat = flat * d.levels + cell[a];
  }
  return static_cast<CellIndex>(flat);
}

}  // namespace kappamax
