#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kappamax/agreement.hpp"
#include "kappamax/errors.hpp"
#include "kappamax/fiber.hpp"
#include "kappamax/markov.hpp"
#include "kappamax/rng.hpp"
#include "kappamax/table.hpp"

namespace kappamax {

struct AnnealConfig {
  /// Initial temperature.
  double tau0 = 1.0;
  /// Geometric decay factor: tau at step b is tau0 * decay^(b-1).
  double decay = 0.999;
  /// Stop after this many consecutive steps without a change in observed
  /// agreement. 0 selects the default max(10 * basis size, 1000).
  std::int64_t stop_c = 0;
  /// Hard cap on the number of steps; must be >= the stopping window.
  std::int64_t max_steps = 10'000'000;
  std::uint64_t seed = 1;
};

struct AnnealResult {
  Table best_table;
  KappaValue best_kappa;
  /// Steps executed when the run stopped, including the stagnant tail.
  std::int64_t steps_total = 0;
  /// Step index of the last accepted agreement-changing move (0 if none).
  std::int64_t steps_last_change = 0;
  std::int64_t accepted_moves = 0;
  std::uint64_t seed = 0;
};

/// min{exp(delta / tau), 1}: certain acceptance for non-decreasing moves.
inline double acceptance_probability(double delta, double tau) {
  if (!(tau > 0.0)) throw Error("temperature must be positive");
  if (delta >= 0.0) return 1.0;
  return std::exp(delta / tau);
}

namespace detail {

/// Applies every diagonal move that keeps the counts nonnegative, repeating
/// until none applies. Each application moves two units onto the main
/// diagonal, so the loop terminates and observed agreement never decreases.
inline void diagonal_sweep_counts(const std::vector<BasicMove>& moves,
                                  std::vector<Count>& counts) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const BasicMove& m : moves) {
      while (counts[m.minus()[0]] > 0 && counts[m.minus()[1]] > 0) {
        ++counts[m.plus()[0]];
        ++counts[m.plus()[1]];
        --counts[m.minus()[0]];
        --counts[m.minus()[1]];
        changed = true;
      }
    }
  }
}

}  // namespace detail

/// Fixed point of applying all moves with two +1 entries on the main
/// diagonal. Observed agreement is non-decreasing throughout, under every
/// scheme.
inline Table diagonal_sweep(const Table& table,
                            const DisagreementScheme& scheme) {
  detail::check_scheme_levels(table, scheme);
  std::vector<Count> counts(table.counts().begin(), table.counts().end());
  detail::diagonal_sweep_counts(diagonal_moves(table.dims()), counts);
  return Table(table.dims(), std::move(counts));
}

/// Simulated annealing over the fiber of the input table: draw a signed
/// basic move, accept nonnegative proposals with probability
/// min{exp((A(n') - A(n)) / tau), 1}, decay tau every step (rejected and
/// inapplicable proposals included), and stop after `stop_c` consecutive
/// steps without a change in observed agreement or at the step cap. The best
/// configuration seen is kept; the diagonal sweep runs at the end.
/// Deterministic given the seed.
inline AnnealResult anneal_max_kappa(const Table& table,
                                     const DisagreementScheme& scheme,
                                     const AnnealConfig& config = {},
                                     const MarkovBasis* basis_in = nullptr) {
  detail::check_scheme_levels(table, scheme);
  const Count n = table.total();
  if (n == 0) throw DegenerateTableError("empty table");
  if (detail::degenerate_margins(table.fiber_statistic())) {
    throw DegenerateTableError("kappa undefined: expected agreement equals one");
  }
  if (!(config.tau0 > 0.0)) throw Error("tau0 must be positive");
  if (!(config.decay > 0.0 && config.decay < 1.0)) {
    throw Error("decay must lie in (0, 1)");
  }
  std::optional<MarkovBasis> owned;
  if (basis_in == nullptr) owned = basis_for(table.dims());
  const MarkovBasis& basis = basis_in != nullptr ? *basis_in : *owned;
  if (basis.dims() != table.dims()) {
    throw DimensionError("basis dimensions do not match the table");
  }
  const std::int64_t stop_c =
      config.stop_c > 0
          ? config.stop_c
          : std::max<std::int64_t>(10 * static_cast<std::int64_t>(basis.size()),
                                   1000);
  if (config.max_steps < stop_c) {
    throw Error("max_steps must be at least the stopping window");
  }

  const Dims& dims = table.dims();
  const bool rational = scheme.is_rational();
  std::vector<std::int64_t> cellw;
  std::vector<double> dcellw;
  if (rational) {
    cellw = detail::cell_weight_numerators(dims, scheme);
  } else {
    dcellw = detail::cell_weight_doubles(dims, scheme);
  }

  std::vector<Count> counts(table.counts().begin(), table.counts().end());
  // Running disagreement statistic: smaller is better. Exact integers for
  // rational schemes; a tracked double otherwise (only used to pick the best
  // snapshot; final kappas are recomputed from the table).
  std::int64_t uo = 0;
  double dsum = 0.0;
  if (rational) {
    for (std::size_t c = 0; c < counts.size(); ++c) uo += counts[c] * cellw[c];
  } else {
    dsum = detail::dot(counts, dcellw);
  }

  std::vector<Count> best_counts = counts;
  std::int64_t best_uo = uo;
  double best_dsum = dsum;

  std::mt19937_64 rng(config.seed);
  double tau = config.tau0;
  const double f = detail::pair_average_factor(dims.raters);
  const double inv_n = 1.0 / static_cast<double>(n);

  std::int64_t steps_total = config.max_steps;
  std::int64_t last_change = 0;
  std::int64_t accepted = 0;
  std::int64_t stagnant = 0;

  for (std::int64_t b = 1; b <= config.max_steps; ++b) {
    const std::size_t idx = uniform_index(rng, basis.size() * 2);
    const BasicMove& m = basis[idx >> 1];
    const bool positive = (idx & 1) == 0;
    const auto& up = positive ? m.plus() : m.minus();
    const auto& down = positive ? m.minus() : m.plus();
    bool changed = false;
    if (counts[down[0]] > 0 && counts[down[1]] > 0) {
      std::int64_t dnum = 0;
      double ddot = 0.0;
      double delta;
      if (rational) {
        dnum = cellw[up[0]] + cellw[up[1]] - cellw[down[0]] - cellw[down[1]];
        delta = f * (static_cast<double>(-dnum) /
                     static_cast<double>(scheme.denominator())) * inv_n;
      } else {
        ddot = dcellw[up[0]] + dcellw[up[1]] - dcellw[down[0]] - dcellw[down[1]];
        delta = f * (-ddot) * inv_n;
      }
      const double p =
          delta >= 0.0 ? 1.0 : (tau > 0.0 ? std::exp(delta / tau) : 0.0);
      const double u = uniform_unit(rng);
      if (p > u) {
        ++counts[up[0]];
        ++counts[up[1]];
        --counts[down[0]];
        --counts[down[1]];
        ++accepted;
        if (rational) {
          uo += dnum;
          changed = dnum != 0;
          if (uo < best_uo) {
            best_uo = uo;
            best_counts = counts;
          }
        } else {
          dsum += ddot;
          changed = std::abs(delta) > 1e-12;
          if (dsum < best_dsum - 1e-12) {
            best_dsum = dsum;
            best_counts = counts;
          }
        }
      }
    }
    if (changed) {
      stagnant = 0;
      last_change = b;
    } else {
      ++stagnant;
    }
    tau *= config.decay;
    if (stagnant >= stop_c) {
      steps_total = b;
      break;
    }
  }

  const std::vector<BasicMove> diag = diagonal_moves(dims);
  detail::diagonal_sweep_counts(diag, counts);
  if (best_counts != counts) {
    detail::diagonal_sweep_counts(diag, best_counts);
    // Keep whichever post-sweep configuration disagrees less; ties go to the
    // final chain state.
    if (rational) {
      std::int64_t u_final = 0, u_best = 0;
      for (std::size_t c = 0; c < counts.size(); ++c) {
        u_final += counts[c] * cellw[c];
        u_best += best_counts[c] * cellw[c];
      }
      if (u_best < u_final) counts = std::move(best_counts);
    } else {
      if (detail::dot(best_counts, dcellw) < detail::dot(counts, dcellw)) {
        counts = std::move(best_counts);
      }
    }
  }

  Table best_table(dims, std::move(counts));
  KappaValue kappa = weighted_kappa(best_table, scheme);
  return AnnealResult{std::move(best_table), kappa,          steps_total,
                      last_change,           accepted,       config.seed};
}

}  // namespace kappamax
