#pragma once

#include <random>
#include <vector>

#include "kappamax/kappamax.hpp"

namespace fixtures {

using kappamax::Count;
using kappamax::Dims;
using kappamax::MarginVector;
using kappamax::Table;

/// Bundled two-rater example (4 levels, N = 33). Used throughout the suite;
/// its fiber has 644,850 tables.
inline Table ex4() {
  return Table(2, 4,
               {5, 3, 2, 1,
                1, 4, 3, 0,
                0, 1, 5, 1,
                0, 1, 2, 4});
}

/// Member of ex4's linear-kappa level set attaining the quadratic minimum.
inline Table ex4_level_min_q() {
  return Table(2, 4,
               {6, 0, 1, 4,
                0, 8, 0, 0,
                0, 0, 7, 0,
                0, 1, 4, 2});
}

/// Member of ex4's linear-kappa level set attaining the quadratic maximum.
inline Table ex4_level_max_q() {
  return Table(2, 4,
               {6, 5, 0, 0,
                0, 3, 5, 0,
                0, 1, 2, 4,
                0, 0, 5, 2});
}

/// Fiber maxima of ex4 under the quadratic / linear / sqrt schemes.
inline Table ex4_max_q() {
  return Table(2, 4,
               {6, 5, 0, 0,
                0, 4, 4, 0,
                0, 0, 7, 0,
                0, 0, 1, 6});
}
inline Table ex4_max_l() {
  return Table(2, 4,
               {6, 3, 2, 0,
                0, 6, 2, 0,
                0, 0, 7, 0,
                0, 0, 1, 6});
}
inline Table ex4_max_s() {
  return Table(2, 4,
               {6, 1, 4, 0,
                0, 8, 0, 0,
                0, 0, 7, 0,
                0, 0, 1, 6});
}

/// Bundled three-rater example (3 levels, N = 16), flat in rater-1-slowest
/// order: slice per rater-1 level, rows = rater 2, columns = rater 3.
inline Table ex27() {
  return Table(3, 3,
               {2, 1, 0,  0, 1, 0,  0, 0, 1,
                0, 1, 0,  1, 3, 1,  0, 0, 0,
                0, 1, 0,  0, 1, 0,  0, 0, 3});
}

/// Near-diagonal 4x4 table: diagonal 4s plus single counts at (2,3) and
/// (3,4) (1-based). Moving its off-diagonal mass around is the classic
/// example of scheme-dependent kappa behavior.
inline Table near_diag() {
  return Table(2, 4,
               {4, 0, 0, 0,
                0, 4, 1, 0,
                0, 0, 4, 1,
                0, 0, 0, 4});
}

/// The move that turns near_diag's two adjacent disagreements into one
/// two-step disagreement: -1 at (2,3) and (3,4), +1 at (2,4) and (3,3).
inline kappamax::BasicMove near_diag_move() {
  const Dims d{2, 4};
  const auto f = [&](int i, int j) {
    const std::vector<int> cell{i, j};
    return kappamax::flatten(d, cell);
  };
  return kappamax::BasicMove(d, {f(1, 3), f(2, 2)}, {f(1, 2), f(2, 3)});
}

/// near_diag after the move: diagonal (4,4,5,4) with a single count at (2,4).
inline Table near_diag_after() {
  return Table(2, 4,
               {4, 0, 0, 0,
                0, 4, 0, 1,
                0, 0, 5, 0,
                0, 0, 0, 4});
}

// ---------------------------------------------------------------------------
// Independent oracles. These deliberately avoid the library's computation
// paths: the fiber oracle enumerates raw compositions, and the kappa oracle
// transcribes the defining formulas on agreement weights w = 1 - u.

/// Every nonnegative integer table with the given margins, by trying all
/// compositions of N over the cells. Exponential; small instances only.
inline std::vector<std::vector<Count>> brute_force_fiber(
    const MarginVector& margins) {
  const Dims d = margins.dims;
  const std::int64_t ncells = d.cell_count();
  const Count n = margins.total();
  std::vector<std::vector<Count>> out;
  std::vector<Count> cur(ncells, 0);
  const auto rec = [&](auto&& self, std::int64_t cell, Count remaining) -> void {
    if (cell == ncells) {
      if (remaining != 0) return;
      if (Table(d, cur).fiber_statistic() == margins) out.push_back(cur);
      return;
    }
    for (Count v = 0; v <= remaining; ++v) {
      cur[cell] = v;
      self(self, cell + 1, remaining - v);
    }
    cur[cell] = 0;
  };
  rec(rec, 0, n);
  return out;
}

/// Number of 2x2 tables with row sums (a, N-a) and column sums (b, N-b):
/// the top-left cell ranges over [max(0, a+b-N), min(a, b)].
inline Count fiber_count_2x2(Count a, Count b, Count n) {
  const Count lo = std::max<Count>(0, a + b - n);
  const Count hi = std::min(a, b);
  return hi >= lo ? hi - lo + 1 : 0;
}

/// Direct transcription of the defining kappa formulas on agreement weights.
inline double reference_kappa(const Table& t,
                              const kappamax::DisagreementScheme& s) {
  const int k = t.levels();
  const double n = static_cast<double>(t.total());
  double obs = 0.0, exp = 0.0;
  int pairs = 0;
  for (int u = 0; u < t.raters(); ++u) {
    for (int v = u + 1; v < t.raters(); ++v) {
      ++pairs;
      const std::vector<Count> pm = t.pair_margin(u, v);
      const std::vector<Count> mu = t.margin(u);
      const std::vector<Count> mv = t.margin(v);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          const double w = 1.0 - s.u(i, j);
          obs += w * static_cast<double>(pm[i * k + j]) / n;
          exp += w * (static_cast<double>(mu[i]) / n) *
                 (static_cast<double>(mv[j]) / n);
        }
      }
    }
  }
  obs /= pairs;
  exp /= pairs;
  return (obs - exp) / (1.0 - exp);
}

/// Random nonnegative table with the given shape and total, multinomial over
/// cells with uniform probabilities.
inline Table random_table(Dims dims, Count total, std::mt19937_64& rng) {
  std::vector<Count> counts(dims.cell_count(), 0);
  for (Count i = 0; i < total; ++i) {
    ++counts[kappamax::uniform_index(rng, counts.size())];
  }
  return Table(dims, std::move(counts));
}

}  // namespace fixtures
