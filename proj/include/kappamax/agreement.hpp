#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kappamax/errors.hpp"
#include "kappamax/move.hpp"
#include "kappamax/table.hpp"
#include "kappamax/weights.hpp"

namespace kappamax {

/// A kappa-type index. `exact` carries the disagreement ratio (num, den) with
/// value = 1 - num/den, present when the scheme has an exact rational form.
struct KappaValue {
  double value = 0.0;
  std::optional<std::pair<std::int64_t, std::int64_t>> exact;
};

namespace detail {

inline void check_scheme_levels(const Table& t, const DisagreementScheme& s) {
  if (s.levels() != t.levels()) {
    throw DimensionError("scheme levels do not match the table");
  }
}

/// 2 / (r(r-1)): the pairwise-average factor. Equals 1 when r = 2.
inline double pair_average_factor(int raters) {
  return 2.0 / (static_cast<double>(raters) * (raters - 1));
}

/// Expected agreement equals one iff every rater margin is concentrated on
/// one common category. Decided structurally, not by floating comparison.
inline bool degenerate_margins(const MarginVector& margins) {
  int support = -1;
  for (const auto& m : margins.per_rater) {
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      if (m[i] == 0) continue;
      if (support == -1) support = i;
      if (i != support) return false;
    }
  }
  return true;
}

/// Sum over rater pairs of sum_ij u_ij n^(uv)_ij, on the double weights.
inline double observed_disagreement(const Table& t,
                                    const DisagreementScheme& s) {
  const Dims& d = t.dims();
  const int k = d.levels;
  double total = 0.0;
  for (int u = 0; u < d.raters; ++u) {
    for (int v = u + 1; v < d.raters; ++v) {
      const std::vector<Count> m = t.pair_margin(u, v);
      double acc = 0.0;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          if (m[i * k + j] != 0) {
            acc += s.u(i, j) * static_cast<double>(m[i * k + j]);
          }
        }
      }
      total += acc;
    }
  }
  return total;
}

/// Same sum on the integer numerators; exact for rational schemes.
inline std::int64_t observed_disagreement_numerator(
    const Table& t, const DisagreementScheme& s) {
  const Dims& d = t.dims();
  const int k = d.levels;
  std::int64_t total = 0;
  for (int u = 0; u < d.raters; ++u) {
    for (int v = u + 1; v < d.raters; ++v) {
      const std::vector<Count> m = t.pair_margin(u, v);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          total += s.numerator(i, j) * m[i * k + j];
        }
      }
    }
  }
  return total;
}

/// Sum over rater pairs of sum_ij u_ij n^(u)_i n^(v)_j (double weights).
inline double expected_disagreement(const MarginVector& margins,
                                    const DisagreementScheme& s) {
  const int k = margins.dims.levels;
  double total = 0.0;
  for (int u = 0; u < margins.dims.raters; ++u) {
    for (int v = u + 1; v < margins.dims.raters; ++v) {
      for (int i = 0; i < k; ++i) {
        if (margins.per_rater[u][i] == 0) continue;
        for (int j = 0; j < k; ++j) {
          total += s.u(i, j) *
                   static_cast<double>(margins.per_rater[u][i]) *
                   static_cast<double>(margins.per_rater[v][j]);
        }
      }
    }
  }
  return total;
}

inline std::int64_t expected_disagreement_numerator(
    const MarginVector& margins, const DisagreementScheme& s) {
  const int k = margins.dims.levels;
  std::int64_t total = 0;
  for (int u = 0; u < margins.dims.raters; ++u) {
    for (int v = u + 1; v < margins.dims.raters; ++v) {
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          total += s.numerator(i, j) * margins.per_rater[u][i] *
                   margins.per_rater[v][j];
        }
      }
    }
  }
  return total;
}

}  // namespace detail

/// A_{o,w}: mean over rater pairs of (1/N) sum_ij w_ij n^(uv)_ij. In [0, 1].
inline double observed_agreement(const Table& t, const DisagreementScheme& s) {
  detail::check_scheme_levels(t, s);
  if (t.total() == 0) throw DegenerateTableError("empty table");
  const double f = detail::pair_average_factor(t.raters());
  return 1.0 - f * detail::observed_disagreement(t, s) /
                   static_cast<double>(t.total());
}

/// A_{e,w}: mean over rater pairs of sum_ij w_ij (n^(u)_i/N)(n^(v)_j/N).
inline double expected_agreement(const Table& t, const DisagreementScheme& s) {
  detail::check_scheme_levels(t, s);
  const Count n = t.total();
  if (n == 0) throw DegenerateTableError("empty table");
  const double f = detail::pair_average_factor(t.raters());
  return 1.0 - f * detail::expected_disagreement(t.fiber_statistic(), s) /
                   (static_cast<double>(n) * static_cast<double>(n));
}

/// Weighted kappa (A_o - A_e) / (1 - A_e), computed as
/// 1 - N * D_obs / D_exp over disagreement sums so that the pairwise-average
/// factors cancel. Pairwise across all rater pairs when r > 2.
inline KappaValue weighted_kappa(const Table& t, const DisagreementScheme& s) {
  detail::check_scheme_levels(t, s);
  const Count n = t.total();
  if (n == 0) throw DegenerateTableError("empty table");
  const MarginVector margins = t.fiber_statistic();
  if (detail::degenerate_margins(margins)) {
    throw DegenerateTableError(
        "kappa undefined: expected agreement equals one");
  }
  KappaValue out;
  if (s.is_rational()) {
    const std::int64_t d_obs = detail::observed_disagreement_numerator(t, s);
    const std::int64_t d_exp =
        detail::expected_disagreement_numerator(margins, s);
    out.exact = std::make_pair(n * d_obs, d_exp);
    out.value = 1.0 - static_cast<double>(n * d_obs) /
                      static_cast<double>(d_exp);
  } else {
    const double d_obs = detail::observed_disagreement(t, s);
    const double d_exp = detail::expected_disagreement(margins, s);
    out.value = 1.0 - static_cast<double>(n) * d_obs / d_exp;
  }
  return out;
}

/// Unweighted Cohen kappa for two raters; identical to weighted kappa under
/// the identity scheme.
inline KappaValue cohen_kappa(const Table& t) {
  if (t.raters() != 2) {
    throw DimensionError("Cohen's kappa is defined for two raters");
  }
  return weighted_kappa(t, identity_scheme(t.levels()));
}

namespace detail {

/// Per-pair contribution of a signed move to the disagreement sum, written
/// against a generic weight accessor. The two-way projection of a basic move
/// is either a basic move (four distinct projected cells) or null; null
/// projections contribute exactly zero.
template <typename Weight, typename Acc>
inline void move_disagreement(const SignedMove& sm, const Weight& w,
                              Acc& total) {
  const Dims& d = sm.move.dims();
  const auto& up = sm.up_cells();
  const auto& down = sm.down_cells();
  for (int u = 0; u < d.raters; ++u) {
    for (int v = u + 1; v < d.raters; ++v) {
      const int p0i = cell_coord(d, up[0], u), p0j = cell_coord(d, up[0], v);
      const int p1i = cell_coord(d, up[1], u), p1j = cell_coord(d, up[1], v);
      const int m0i = cell_coord(d, down[0], u), m0j = cell_coord(d, down[0], v);
      const int m1i = cell_coord(d, down[1], u), m1j = cell_coord(d, down[1], v);
      if ((p0i == m0i && p0j == m0j) || (p0i == m1i && p0j == m1j)) {
        continue;  // null projection
      }
      total += w(p0i, p0j);
      total += w(p1i, p1j);
      total -= w(m0i, m0j);
      total -= w(m1i, m1j);
    }
  }
}

}  // namespace detail

/// Exact change of the disagreement numerator sum caused by a move, for
/// rational schemes; kappa (and observed agreement) is unchanged iff this is
/// zero. std::nullopt for schemes without a rational form.
inline std::optional<std::int64_t> agreement_delta_numerator(
    const SignedMove& sm, const DisagreementScheme& s) {
  if (s.levels() != sm.move.dims().levels) {
    throw DimensionError("scheme levels do not match the move");
  }
  if (!s.is_rational()) return std::nullopt;
  std::int64_t total = 0;
  detail::move_disagreement(
      sm, [&s](int i, int j) { return s.numerator(i, j); }, total);
  return total;
}

/// A_{o,w}(m): the change in observed agreement caused by applying the move,
/// computable from the move's four cells alone. O(1) per rater pair.
inline double agreement_delta(const SignedMove& sm,
                              const DisagreementScheme& s, Count total_n) {
  if (s.levels() != sm.move.dims().levels) {
    throw DimensionError("scheme levels do not match the move");
  }
  if (total_n <= 0) throw DegenerateTableError("empty table");
  const double f = detail::pair_average_factor(sm.move.dims().raters);
  if (s.is_rational()) {
    std::int64_t num = 0;
    detail::move_disagreement(
        sm, [&s](int i, int j) { return s.numerator(i, j); }, num);
    return f * (static_cast<double>(-num) / static_cast<double>(s.denominator())) /
           static_cast<double>(total_n);
  }
  double acc = 0.0;
  detail::move_disagreement(sm, [&s](int i, int j) { return s.u(i, j); }, acc);
  return f * (-acc) / static_cast<double>(total_n);
}

inline double agreement_delta(const BasicMove& m, const DisagreementScheme& s,
                              Count total_n) {
  return agreement_delta(SignedMove{m, +1}, s, total_n);
}

}  // namespace kappamax
