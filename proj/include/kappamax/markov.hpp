#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "kappamax/dims.hpp"
#include "kappamax/errors.hpp"
#include "kappamax/move.hpp"
#include "kappamax/rng.hpp"

namespace kappamax {

/// A finite set of basic moves connecting every fiber with the given shape.
/// Moves are stored unsigned and deduplicated: no duplicates, and no move is
/// the negation of another (the smallest flat cell of each move carries +1).
/// Signs are attached at sampling time.
class MarkovBasis {
 public:
  MarkovBasis() = default;
  MarkovBasis(Dims dims, std::vector<BasicMove> moves)
      : dims_(dims), moves_(std::move(moves)) {}

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return moves_.size(); }
  const std::vector<BasicMove>& moves() const { return moves_; }
  const BasicMove& operator[](std::size_t i) const { return moves_[i]; }

  bool contains(const BasicMove& m) const {
    return std::find(moves_.begin(), moves_.end(), m) != moves_.end();
  }
  bool contains_up_to_sign(const BasicMove& m) const {
    return contains(m) || contains(m.negated());
  }

 private:
  Dims dims_;
  std::vector<BasicMove> moves_;
};

namespace detail {

/// All basic moves whose +1 cells are {c0, c1}, c0 < c1. With q differing
/// coordinates there is one move per proper nonempty subset S of the
/// differing set, up to the S <-> complement symmetry; we canonicalize by
/// requiring the first differing axis to lie in S, giving 2^(q-1) - 1 moves.
inline std::vector<BasicMove> moves_for_cell_pair(const Dims& dims,
                                                  CellIndex c0, CellIndex c1) {
  std::vector<int> a0(dims.raters), a1(dims.raters);
  unflatten(dims, c0, a0);
  unflatten(dims, c1, a1);
  std::vector<int> differing;
  for (int a = 0; a < dims.raters; ++a) {
    if (a0[a] != a1[a]) differing.push_back(a);
  }
  const int q = static_cast<int>(differing.size());
  std::vector<BasicMove> out;
  if (q < 2) return out;
  std::vector<int> m0(dims.raters), m1(dims.raters);
  const unsigned full = (1u << (q - 1)) - 1u;  // subsets of differing[1..q-1]
  for (unsigned mask = 0; mask < full; ++mask) {
    m0 = a0;
    m1 = a1;
    // S = {differing[0]} plus the axes selected by mask: those keep the +1
    // coordinates in the -1 cells; the rest are swapped.
    for (int t = 1; t < q; ++t) {
      if ((mask >> (t - 1)) & 1u) continue;
      const int axis = differing[t];
      std::swap(m0[axis], m1[axis]);
    }
    out.emplace_back(dims,
                     std::array<CellIndex, 2>{c0, c1},
                     std::array<CellIndex, 2>{flatten(dims, m0),
                                              flatten(dims, m1)});
  }
  return out;
}

/// Enumerates the full basic-move basis for any r >= 2. Every move arises
/// once from its +1 cell pair and once, negated, from its -1 cell pair;
/// keeping only moves whose overall smallest cell is a +1 cell retains
/// exactly one orientation of each.
inline std::vector<BasicMove> enumerate_basic_moves(const Dims& dims) {
  const std::int64_t ncells = dims.cell_count();
  std::vector<BasicMove> out;
  for (CellIndex c0 = 0; c0 + 1 < ncells; ++c0) {
    for (CellIndex c1 = c0 + 1; c1 < ncells; ++c1) {
      for (BasicMove& m : moves_for_cell_pair(dims, c0, c1)) {
        if (m.plus()[0] < m.minus()[0]) out.push_back(std::move(m));
      }
    }
  }
  return out;
}

}  // namespace detail

/// Markov basis for two-way tables with fixed margins: +1 at (i,j), (i',j')
/// and -1 at (i,j'), (i',j) over i < i', j < j'. Cardinality C(k,2)^2.
inline MarkovBasis two_way_basis(int k) {
  const Dims dims = Dims::checked(2, k);
  std::vector<BasicMove> moves;
  moves.reserve(static_cast<std::size_t>(k) * (k - 1) / 2 *
                (static_cast<std::size_t>(k) * (k - 1) / 2));
  std::vector<int> cell(2);
  for (int i = 0; i < k; ++i) {
    for (int i2 = i + 1; i2 < k; ++i2) {
      for (int j = 0; j < k; ++j) {
        for (int j2 = j + 1; j2 < k; ++j2) {
          const auto f = [&](int a, int b) {
            cell[0] = a;
            cell[1] = b;
            return flatten(dims, cell);
          };
          moves.emplace_back(dims,
                             std::array<CellIndex, 2>{f(i, j), f(i2, j2)},
                             std::array<CellIndex, 2>{f(i, j2), f(i2, j)});
        }
      }
    }
  }
  return MarkovBasis(dims, std::move(moves));
}

/// Markov basis for r >= 3 raters with fixed one-way margins, per the basic
/// move construction (pairs of +1 cells differing in q >= 2 coordinates, all
/// proper -1 arrangements up to symmetry).
inline MarkovBasis multi_way_basis(int raters, int levels) {
  if (raters < 3) {
    throw DimensionError("multi-way basis needs at least 3 raters");
  }
  const Dims dims = Dims::checked(raters, levels);
  return MarkovBasis(dims, detail::enumerate_basic_moves(dims));
}

/// Dispatch on the number of raters.
inline MarkovBasis basis_for(const Dims& dims) {
  return dims.raters == 2 ? two_way_basis(dims.levels)
                          : multi_way_basis(dims.raters, dims.levels);
}

/// All basis moves whose +1 cells are the diagonal cells (i,...,i) and
/// (j,...,j), i != j, oriented with the +1s on the diagonal. Applying one
/// never decreases observed agreement.
inline std::vector<BasicMove> diagonal_moves(const Dims& dims) {
  Dims d = Dims::checked(dims.raters, dims.levels);
  std::vector<BasicMove> out;
  std::vector<int> cell(d.raters);
  for (int i = 0; i < d.levels; ++i) {
    for (int j = i + 1; j < d.levels; ++j) {
      std::fill(cell.begin(), cell.end(), i);
      const CellIndex ci = flatten(d, cell);
      std::fill(cell.begin(), cell.end(), j);
      const CellIndex cj = flatten(d, cell);
      for (BasicMove& m : detail::moves_for_cell_pair(d, ci, cj)) {
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

/// Two-way margin of a multi-rater basic move on the rater pair (u, v):
/// either a basic two-way move or, when projected cells collide and cancel,
/// the null move (std::nullopt).
inline std::optional<BasicMove> pair_projection(const BasicMove& m, int u,
                                                int v) {
  const Dims& d = m.dims();
  if (d.raters <= 2) throw DimensionError("projection needs r > 2");
  if (u < 0 || v < 0 || u >= d.raters || v >= d.raters || u == v) {
    throw DimensionError("invalid rater pair");
  }
  const Dims two{2, d.levels};
  const auto proj = [&](CellIndex c) {
    return static_cast<CellIndex>(cell_coord(d, c, u) * d.levels +
                                  cell_coord(d, c, v));
  };
  const CellIndex p0 = proj(m.plus()[0]), p1 = proj(m.plus()[1]);
  const CellIndex m0 = proj(m.minus()[0]), m1 = proj(m.minus()[1]);
  if (p0 == m0 || p0 == m1) return std::nullopt;  // entries cancel pairwise
  return BasicMove(two, {p0, p1}, {m0, m1});
}

/// Uniform draw over basis x {+1, -1}.
inline SignedMove random_move(const MarkovBasis& basis, std::mt19937_64& rng) {
  if (basis.size() == 0) throw Error("empty Markov basis");
  const std::size_t idx = uniform_index(rng, basis.size() * 2);
  return SignedMove{basis[idx >> 1], (idx & 1) ? -1 : +1};
}

}  // namespace kappamax
