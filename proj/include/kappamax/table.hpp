#pragma once

#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kappamax/dims.hpp"
#include "kappamax/errors.hpp"
#include "kappamax/move.hpp"

namespace kappamax {

/// The full set of one-way margins of a table, in rater order. This is the
/// statistic T fixed along a fiber.
struct MarginVector {
  Dims dims;
  std::vector<std::vector<Count>> per_rater;

  Count total() const {
    if (per_rater.empty()) return 0;
    return std::accumulate(per_rater[0].begin(), per_rater[0].end(), Count{0});
  }

  /// All r vectors must have length k and share the same sum.
  void validate() const {
    if (static_cast<int>(per_rater.size()) != dims.raters) {
      throw DimensionError("margin vector needs one entry per rater");
    }
    const Count n = total();
    for (const auto& m : per_rater) {
      if (static_cast<int>(m.size()) != dims.levels) {
        throw DimensionError("margin length does not match the level count");
      }
      Count s = 0;
      for (Count v : m) {
        if (v < 0) throw DimensionError("negative margin entry");
        s += v;
      }
      if (s != n) throw DimensionError("margins do not share a common total");
    }
  }

  friend bool operator==(const MarginVector&, const MarginVector&) = default;
};

/// Dense multi-way contingency table of nonnegative integer counts.
/// Immutable after construction; the layout is rater-1 slowest.
class Table {
 public:
  Table(Dims dims, std::vector<Count> counts)
      : dims_(Dims::checked(dims.raters, dims.levels)),
        counts_(std::move(counts)) {
    if (static_cast<std::int64_t>(counts_.size()) != dims_.cell_count()) {
      throw DimensionError("count array length must be levels^raters");
    }
    total_ = 0;
    for (Count v : counts_) {
      if (v < 0) throw DimensionError("negative cell count");
      total_ += v;
    }
  }

  Table(int raters, int levels, std::vector<Count> counts)
      : Table(Dims{raters, levels}, std::move(counts)) {}

  static Table zeros(Dims dims) {
    Dims d = Dims::checked(dims.raters, dims.levels);
    return Table(d, std::vector<Count>(d.cell_count(), 0));
  }

  const Dims& dims() const { return dims_; }
  int raters() const { return dims_.raters; }
  int levels() const { return dims_.levels; }
  Count total() const { return total_; }
  std::span<const Count> counts() const { return counts_; }

  Count at_flat(CellIndex flat) const { return counts_[flat]; }
  Count at(std::span<const int> cell) const {
    return counts_[flatten(dims_, cell)];
  }

  /// One-way margin of rater `axis` (0-based); sums to N.
  std::vector<Count> margin(int axis) const {
    if (axis < 0 || axis >= dims_.raters) {
      throw DimensionError("rater index out of range");
    }
    std::vector<Count> m(dims_.levels, 0);
    const std::int64_t n = dims_.cell_count();
    for (CellIndex c = 0; c < n; ++c) {
      m[cell_coord(dims_, c, axis)] += counts_[c];
    }
    return m;
  }

  /// Two-way margin of the rater pair (u, v), u != v, as a flat k*k array
  /// indexed [i_u * k + i_v]; entries sum to N.
  std::vector<Count> pair_margin(int u, int v) const {
    if (u == v) throw DimensionError("pair margin needs two distinct raters");
    if (u < 0 || v < 0 || u >= dims_.raters || v >= dims_.raters) {
      throw DimensionError("rater index out of range");
    }
    std::vector<Count> m(static_cast<std::size_t>(dims_.levels) * dims_.levels,
                         0);
    const std::int64_t n = dims_.cell_count();
    for (CellIndex c = 0; c < n; ++c) {
      m[cell_coord(dims_, c, u) * dims_.levels + cell_coord(dims_, c, v)] +=
          counts_[c];
    }
    return m;
  }

  /// All one-way margins in rater order: the fiber statistic.
  MarginVector fiber_statistic() const {
    MarginVector mv{dims_, {}};
    mv.per_rater.reserve(dims_.raters);
    for (int a = 0; a < dims_.raters; ++a) mv.per_rater.push_back(margin(a));
    return mv;
  }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  Dims dims_;
  std::vector<Count> counts_;
  Count total_ = 0;
};

/// Returns the table n + m if it is nonnegative, std::nullopt otherwise.
/// The input table is never mutated.
inline std::optional<Table> apply_move(const Table& table,
                                       const SignedMove& move) {
  if (table.dims() != move.move.dims()) {
    throw DimensionError("move dimensions do not match the table");
  }
  for (CellIndex c : move.down_cells()) {
    if (table.at_flat(c) == 0) return std::nullopt;
  }
  std::vector<Count> counts(table.counts().begin(), table.counts().end());
  for (CellIndex c : move.up_cells()) ++counts[c];
  for (CellIndex c : move.down_cells()) --counts[c];
  return Table(table.dims(), std::move(counts));
}

inline std::optional<Table> apply_move(const Table& table,
                                       const BasicMove& move) {
  return apply_move(table, SignedMove{move, +1});
}

}  // namespace kappamax
