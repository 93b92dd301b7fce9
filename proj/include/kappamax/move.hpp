#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>

#include "kappamax/dims.hpp"
#include "kappamax/errors.hpp"

namespace kappamax {

/// A move with exactly four nonzero entries: +1 in two cells and -1 in two
/// cells, lying in the kernel of the one-way margin map. The two +1 cells
/// must differ in at least two coordinates (in both, when r = 2); given that,
/// zero margins force the -1 cells to be a mix of the +1 coordinates, so
/// construction validates the full definition.
class BasicMove {
 public:
  BasicMove(Dims dims, std::array<CellIndex, 2> plus,
            std::array<CellIndex, 2> minus)
      : dims_(dims), plus_(plus), minus_(minus) {
    std::sort(plus_.begin(), plus_.end());
    std::sort(minus_.begin(), minus_.end());
    validate();
  }

  const Dims& dims() const { return dims_; }
  /// The +1 cells, ascending flat order.
  const std::array<CellIndex, 2>& plus() const { return plus_; }
  /// The -1 cells, ascending flat order.
  const std::array<CellIndex, 2>& minus() const { return minus_; }

  BasicMove negated() const { return BasicMove(dims_, minus_, plus_); }

  /// Entry of the move at a flat cell: +1, -1, or 0.
  int entry(CellIndex flat) const {
    if (flat == plus_[0] || flat == plus_[1]) return +1;
    if (flat == minus_[0] || flat == minus_[1]) return -1;
    return 0;
  }

  /// Number of coordinates in which the two +1 cells differ (q >= 2).
  int differing_axes() const {
    int q = 0;
    for (int a = 0; a < dims_.raters; ++a) {
      if (cell_coord(dims_, plus_[0], a) != cell_coord(dims_, plus_[1], a)) ++q;
    }
    return q;
  }

  std::array<CellIndex, 4> key() const {
    return {plus_[0], plus_[1], minus_[0], minus_[1]};
  }

  friend bool operator==(const BasicMove& a, const BasicMove& b) {
    return a.dims_ == b.dims_ && a.plus_ == b.plus_ && a.minus_ == b.minus_;
  }

 private:
  void validate() const {
    if (plus_[0] == plus_[1] || minus_[0] == minus_[1] ||
        plus_[0] == minus_[0] || plus_[0] == minus_[1] ||
        plus_[1] == minus_[0] || plus_[1] == minus_[1]) {
      throw DimensionError("basic move needs four distinct cells");
    }
    const std::int64_t ncells = dims_.cell_count();
    for (CellIndex c : {plus_[0], plus_[1], minus_[0], minus_[1]}) {
      if (static_cast<std::int64_t>(c) >= ncells) {
        throw DimensionError("move cell out of range");
      }
    }
    int q = 0;
    for (int a = 0; a < dims_.raters; ++a) {
      const int p0 = cell_coord(dims_, plus_[0], a);
      const int p1 = cell_coord(dims_, plus_[1], a);
      const int m0 = cell_coord(dims_, minus_[0], a);
      const int m1 = cell_coord(dims_, minus_[1], a);
      // Zero one-way margins: per axis, the +1 coordinates and the -1
      // coordinates must agree as multisets.
      if (!((p0 == m0 && p1 == m1) || (p0 == m1 && p1 == m0))) {
        throw DimensionError("move is not in the kernel of the margin map");
      }
      if (p0 != p1) ++q;
    }
    if (q < 2) {
      throw DimensionError("the +1 cells of a basic move must differ in at "
                           "least two coordinates");
    }
  }

  Dims dims_;
  std::array<CellIndex, 2> plus_;
  std::array<CellIndex, 2> minus_;
};

/// A basis move together with a direction of application.
struct SignedMove {
  BasicMove move;
  int sign = +1;

  /// Cells incremented by the signed move.
  const std::array<CellIndex, 2>& up_cells() const {
    return sign > 0 ? move.plus() : move.minus();
  }
  /// Cells decremented by the signed move.
  const std::array<CellIndex, 2>& down_cells() const {
    return sign > 0 ? move.minus() : move.plus();
  }
};

}  // namespace kappamax
