#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kappamax/agreement.hpp"
#include "kappamax/errors.hpp"
#include "kappamax/markov.hpp"
#include "kappamax/table.hpp"
#include "kappamax/weights.hpp"

namespace kappamax {

struct FiberOptions {
  /// Hard cap on DFS value placements; exceeding it raises BudgetError.
  std::uint64_t node_budget = 100'000'000ULL;
  /// Aggregate operations may partition the search at the first cell's value
  /// and run branches in parallel. Results are schedule-independent.
  int threads = 1;
};

namespace detail {

/// Per-cell disagreement weight, summed over rater pairs: the U statistic of
/// a table is the dot product of its counts with this vector.
inline std::vector<std::int64_t> cell_weight_numerators(
    const Dims& d, const DisagreementScheme& s) {
  const std::int64_t n = d.cell_count();
  std::vector<std::int64_t> w(n, 0);
  for (CellIndex c = 0; c < n; ++c) {
    for (int u = 0; u < d.raters; ++u) {
      for (int v = u + 1; v < d.raters; ++v) {
        w[c] += s.numerator(cell_coord(d, c, u), cell_coord(d, c, v));
      }
    }
  }
  return w;
}

inline std::vector<double> cell_weight_doubles(const Dims& d,
                                               const DisagreementScheme& s) {
  const std::int64_t n = d.cell_count();
  std::vector<double> w(n, 0.0);
  for (CellIndex c = 0; c < n; ++c) {
    for (int u = 0; u < d.raters; ++u) {
      for (int v = u + 1; v < d.raters; ++v) {
        w[c] += s.u(cell_coord(d, c, u), cell_coord(d, c, v));
      }
    }
  }
  return w;
}

inline double dot(std::span<const Count> counts, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) acc += static_cast<double>(counts[i]) * w[i];
  }
  return acc;
}

/// Level-set key for schemes without a rational form: observed agreement
/// rounded to 1e-9.
inline std::int64_t rounded_agreement_key(double disagreement, Count n,
                                          double pair_factor) {
  const double a = 1.0 - pair_factor * disagreement / static_cast<double>(n);
  return std::llround(a * 1e9);
}

inline KappaValue make_kappa_rational(Count n, std::int64_t d_obs,
                                      std::int64_t d_exp) {
  KappaValue out;
  out.exact = std::make_pair(n * d_obs, d_exp);
  out.value = 1.0 - static_cast<double>(n * d_obs) / static_cast<double>(d_exp);
  return out;
}

inline KappaValue make_kappa_double(Count n, double d_obs, double d_exp) {
  KappaValue out;
  out.value = 1.0 - static_cast<double>(n) * d_obs / d_exp;
  return out;
}

/// Depth-first enumeration of all nonnegative integer tables with the given
/// one-way margins, visiting cells in rater-1-slowest order.
///
/// Bounds at each cell: the value is capped by every axis' remaining budget;
/// it is forced from below by the requirement that the rest of the current
/// rater-1 slice absorb the slice's remaining total. The absorption capacity
/// is over-estimated per axis (sum of the budgets of the axis values that
/// still occur in the rest of the slice), so no valid table is pruned, and
/// every completed path is a valid table because budgets are exactly consumed
/// at slice boundaries.
///
/// Up to `int_weights.size()` integer linear statistics (dot products with
/// per-cell weights) are maintained incrementally and handed to the visitor.
class FiberDfs {
 public:
  FiberDfs(const MarginVector& margins,
           std::vector<std::vector<std::int64_t>> int_weights,
           std::uint64_t node_budget,
           std::atomic<std::uint64_t>* shared_nodes = nullptr)
      : dims_(margins.dims),
        weights_(std::move(int_weights)),
        node_budget_(node_budget),
        shared_nodes_(shared_nodes) {
    margins.validate();
    ncells_ = dims_.cell_count();
    k_ = dims_.levels;
    r_ = dims_.raters;
    budget_ = margins.per_rater;
    counts_.assign(ncells_, 0);
    running_.assign(weights_.size(), 0);
    coord_.assign(static_cast<std::size_t>(r_) * ncells_, 0);
    for (std::int64_t c = 0; c < ncells_; ++c) {
      for (int a = 0; a < r_; ++a) {
        coord_[a * ncells_ + c] =
            static_cast<std::uint8_t>(cell_coord(dims_, static_cast<CellIndex>(c), a));
      }
    }
  }

  /// Runs the enumeration and returns the number of tables visited. When
  /// first_value >= 0 the first cell is pinned to that value (used to
  /// partition the search for parallel runs).
  template <class Visitor>
  std::uint64_t run(Visitor&& visit, Count first_value = -1) {
    visited_ = 0;
    if (first_value < 0) {
      place(0, visit);
    } else {
      Count lo = 0, hi = 0;
      bounds(0, lo, hi);
      if (first_value >= lo && first_value <= hi) {
        assign(0, first_value);
        place(1, visit);
        unassign(0, first_value);
      }
    }
    flush_nodes();
    return visited_;
  }

 private:
  void bounds(std::int64_t cell, Count& lo, Count& hi) const {
    const Count s = budget_[0][coord_[cell]];
    hi = s;
    for (int a = 1; a < r_; ++a) {
      hi = std::min(hi, budget_[a][coord_[a * ncells_ + cell]]);
    }
    // Slice forcing: cap_b over-estimates how much the rest of this slice can
    // absorb through axis b. An axis is unconstraining once an earlier
    // in-slice axis can still advance (all of its values then reappear).
    Count cap = std::numeric_limits<Count>::max();
    for (int b = 1; b < r_; ++b) {
      const int cb = coord_[b * ncells_ + cell];
      Count tail = 0;
      for (int y = cb + 1; y < k_; ++y) tail += budget_[b][y];
      bool later_open = false;
      for (int b2 = b + 1; b2 < r_; ++b2) {
        if (coord_[b2 * ncells_ + cell] < k_ - 1) {
          later_open = true;
          break;
        }
      }
      const Count cap_b = tail + (later_open ? budget_[b][cb] : 0);
      cap = std::min(cap, cap_b);
      if (cb < k_ - 1) break;
    }
    lo = s > cap ? s - cap : 0;
  }

  void assign(std::int64_t cell, Count v) {
    for (int a = 0; a < r_; ++a) budget_[a][coord_[a * ncells_ + cell]] -= v;
    counts_[cell] = v;
    for (std::size_t w = 0; w < weights_.size(); ++w) {
      running_[w] += v * weights_[w][cell];
    }
  }

  void unassign(std::int64_t cell, Count v) {
    for (int a = 0; a < r_; ++a) budget_[a][coord_[a * ncells_ + cell]] += v;
    counts_[cell] = 0;
    for (std::size_t w = 0; w < weights_.size(); ++w) {
      running_[w] -= v * weights_[w][cell];
    }
  }

  void count_node() {
    if (++local_nodes_ < 8192) return;
    flush_nodes();
  }

  void flush_nodes() {
    if (shared_nodes_ != nullptr) {
      const std::uint64_t total = shared_nodes_->fetch_add(
                                      local_nodes_, std::memory_order_relaxed) +
                                  local_nodes_;
      local_nodes_ = 0;
      if (total > node_budget_) {
        throw BudgetError("fiber too large: node budget exceeded");
      }
    } else {
      total_nodes_ += local_nodes_;
      local_nodes_ = 0;
      if (total_nodes_ > node_budget_) {
        throw BudgetError("fiber too large: node budget exceeded");
      }
    }
  }

  template <class Visitor>
  void place(std::int64_t cell, Visitor& visit) {
    if (cell == ncells_) {
      ++visited_;
      visit(std::span<const Count>(counts_),
            std::span<const std::int64_t>(running_));
      return;
    }
    Count lo = 0, hi = 0;
    bounds(cell, lo, hi);
    for (Count v = lo; v <= hi; ++v) {
      count_node();
      assign(cell, v);
      place(cell + 1, visit);
      unassign(cell, v);
    }
  }

  Dims dims_;
  std::int64_t ncells_ = 0;
  int k_ = 0;
  int r_ = 0;
  std::vector<std::vector<Count>> budget_;
  std::vector<Count> counts_;
  std::vector<std::vector<std::int64_t>> weights_;
  std::vector<std::int64_t> running_;
  std::vector<std::uint8_t> coord_;  // coord_[a * ncells + cell]
  std::uint64_t node_budget_ = 0;
  std::atomic<std::uint64_t>* shared_nodes_ = nullptr;
  std::uint64_t local_nodes_ = 0;
  std::uint64_t total_nodes_ = 0;
  std::uint64_t visited_ = 0;
};

/// Runs an accumulator over the fiber, optionally partitioned at the first
/// cell's value across threads. Accumulators must provide
/// visit(counts, stats) and merge(Acc&&); merging happens in first-value
/// order, so results are schedule-independent.
template <class Acc, class Factory>
Acc fiber_accumulate(const MarginVector& margins,
                     const std::vector<std::vector<std::int64_t>>& weights,
                     const FiberOptions& opt, Factory make) {
  margins.validate();
  if (opt.threads <= 1) {
    Acc acc = make();
    FiberDfs dfs(margins, weights, opt.node_budget);
    dfs.run([&acc](std::span<const Count> c, std::span<const std::int64_t> s) {
      acc.visit(c, s);
    });
    return acc;
  }
  Count hi0 = margins.per_rater[0][0];
  for (int a = 1; a < margins.dims.raters; ++a) {
    hi0 = std::min(hi0, margins.per_rater[a][0]);
  }
  const int ntasks = static_cast<int>(hi0) + 1;
  std::vector<std::optional<Acc>> results(ntasks);
  std::vector<std::exception_ptr> errors(ntasks);
  std::atomic<std::uint64_t> shared_nodes{0};
  std::atomic<int> next{0};
  const int nworkers = std::min(opt.threads, ntasks);
  std::vector<std::thread> workers;
  workers.reserve(nworkers);
  for (int w = 0; w < nworkers; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        const int v0 = next.fetch_add(1);
        if (v0 >= ntasks) return;
        try {
          Acc acc = make();
          FiberDfs dfs(margins, weights, opt.node_budget, &shared_nodes);
          dfs.run(
              [&acc](std::span<const Count> c, std::span<const std::int64_t> s) {
                acc.visit(c, s);
              },
              static_cast<Count>(v0));
          results[v0] = std::move(acc);
        } catch (...) {
          errors[v0] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Acc out = make();
  for (int v0 = 0; v0 < ntasks; ++v0) {
    if (results[v0]) out.merge(std::move(*results[v0]));
  }
  return out;
}

}  // namespace detail

/// Visits every nonnegative integer table with the given one-way margins
/// exactly once, in a deterministic depth-first order, and returns how many
/// were visited. The visitor receives the dense count array.
template <class Visitor>
std::uint64_t enumerate_fiber(const MarginVector& margins, Visitor&& visit,
                              const FiberOptions& opt = {}) {
  detail::FiberDfs dfs(margins, {}, opt.node_budget);
  return dfs.run([&visit](std::span<const Count> counts,
                          std::span<const std::int64_t>) { visit(counts); });
}

struct FiberHistogramEntry {
  std::int64_t key = 0;  // exact disagreement numerator, or agreement at 1e-9
  double kappa = 0.0;
  std::uint64_t count = 0;
};

struct FiberSummary {
  std::uint64_t size = 0;
  std::vector<FiberHistogramEntry> histogram;  // ascending kappa
  KappaValue max_kappa;
  std::vector<Table> argmax_tables;
};

struct LevelSetResult {
  std::uint64_t fiber_size = 0;
  std::uint64_t level_count = 0;
  KappaValue kappa;  // kappa of the input table
  std::vector<FiberHistogramEntry> histogram;
};

struct CrossSchemeRange {
  std::uint64_t level_count = 0;  // size of the scheme-a level set
  KappaValue min_kappa;
  KappaValue max_kappa;
  std::vector<Table> argmin_tables;
  std::vector<Table> argmax_tables;
};

struct MaxKappaResult {
  KappaValue kappa;
  std::vector<Table> argmax_tables;
};

namespace detail {

/// Shared machinery: per-scheme key extraction. For rational schemes the key
/// is the exact integer disagreement numerator (kappa decreases strictly in
/// it); otherwise the rounded observed agreement (kappa increases in it).
struct SchemeKey {
  bool exact = false;
  std::vector<double> dweights;  // used when !exact
  Count n = 0;
  double pair_factor = 1.0;
  int stat_index = -1;  // index into the DFS integer stats when exact

  std::int64_t key(std::span<const Count> counts,
                   std::span<const std::int64_t> stats) const {
    if (exact) return stats[stat_index];
    return rounded_agreement_key(dot(counts, dweights), n, pair_factor);
  }
  /// True when `a` is a strictly better (larger-kappa) key than `b`.
  bool better(std::int64_t a, std::int64_t b) const {
    return exact ? a < b : a > b;
  }
};

inline SchemeKey make_scheme_key(const Dims& dims,
                                 const DisagreementScheme& s, Count n,
                                 std::vector<std::vector<std::int64_t>>& weights) {
  SchemeKey sk;
  sk.n = n;
  sk.pair_factor = pair_average_factor(dims.raters);
  if (s.is_rational()) {
    sk.exact = true;
    sk.stat_index = static_cast<int>(weights.size());
    weights.push_back(cell_weight_numerators(dims, s));
  } else {
    sk.dweights = cell_weight_doubles(dims, s);
  }
  return sk;
}

/// Builds the kappa value attained at a given key.
inline KappaValue kappa_at_key(const SchemeKey& sk, std::int64_t key,
                               std::int64_t d_exp_num, double d_exp_dbl) {
  if (sk.exact) return make_kappa_rational(sk.n, key, d_exp_num);
  // key is observed agreement scaled by 1e9; recover kappa from it.
  const double a_obs = static_cast<double>(key) * 1e-9;
  const double d_obs = (1.0 - a_obs) * static_cast<double>(sk.n) / sk.pair_factor;
  return make_kappa_double(sk.n, d_obs, d_exp_dbl);
}

struct TieList {
  std::int64_t key = 0;
  bool any = false;
  std::vector<std::vector<Count>> tables;

  void offer(const SchemeKey& sk, std::int64_t k, std::span<const Count> counts) {
    if (!any || sk.better(k, key)) {
      any = true;
      key = k;
      tables.clear();
      tables.emplace_back(counts.begin(), counts.end());
    } else if (k == key) {
      tables.emplace_back(counts.begin(), counts.end());
    }
  }
  void merge(const SchemeKey& sk, TieList&& o) {
    if (!o.any) return;
    if (!any || sk.better(o.key, key)) {
      *this = std::move(o);
    } else if (o.key == key) {
      for (auto& t : o.tables) tables.push_back(std::move(t));
    }
  }
};

inline std::vector<Table> materialize(const Dims& dims,
                                      std::vector<std::vector<Count>>&& raw) {
  std::vector<Table> out;
  out.reserve(raw.size());
  for (auto& counts : raw) out.emplace_back(dims, std::move(counts));
  return out;
}

}  // namespace detail

/// Full fiber scan: size, kappa histogram, maximum kappa and all tables
/// attaining it.
inline FiberSummary fiber_summary(const Table& table,
                                  const DisagreementScheme& scheme,
                                  const FiberOptions& opt = {}) {
  detail::check_scheme_levels(table, scheme);
  const MarginVector margins = table.fiber_statistic();
  const Count n = table.total();
  if (n == 0) throw DegenerateTableError("empty table");
  if (detail::degenerate_margins(margins)) {
    throw DegenerateTableError("kappa undefined: expected agreement equals one");
  }
  std::vector<std::vector<std::int64_t>> weights;
  detail::SchemeKey sk =
      detail::make_scheme_key(table.dims(), scheme, n, weights);

  struct Acc {
    const detail::SchemeKey* sk = nullptr;
    std::uint64_t size = 0;
    std::unordered_map<std::int64_t, std::uint64_t> hist;
    detail::TieList best;

    void visit(std::span<const Count> c, std::span<const std::int64_t> s) {
      ++size;
      const std::int64_t k = sk->key(c, s);
      ++hist[k];
      best.offer(*sk, k, c);
    }
    void merge(Acc&& o) {
      size += o.size;
      for (const auto& [k, v] : o.hist) hist[k] += v;
      best.merge(*sk, std::move(o.best));
    }
  };
  Acc acc = detail::fiber_accumulate<Acc>(margins, weights, opt, [&sk]() {
    Acc a;
    a.sk = &sk;
    return a;
  });

  const std::int64_t d_exp_num =
      scheme.is_rational()
          ? detail::expected_disagreement_numerator(margins, scheme)
          : 0;
  const double d_exp_dbl = detail::expected_disagreement(margins, scheme);

  FiberSummary out;
  out.size = acc.size;
  out.histogram.reserve(acc.hist.size());
  for (const auto& [k, cnt] : acc.hist) {
    out.histogram.push_back(
        {k, detail::kappa_at_key(sk, k, d_exp_num, d_exp_dbl).value, cnt});
  }
  std::sort(out.histogram.begin(), out.histogram.end(),
            [](const auto& a, const auto& b) { return a.kappa < b.kappa; });
  out.max_kappa = detail::kappa_at_key(sk, acc.best.key, d_exp_num, d_exp_dbl);
  out.argmax_tables =
      detail::materialize(table.dims(), std::move(acc.best.tables));
  return out;
}

/// Counts the fiber tables sharing the input table's kappa (exact rational
/// equality when available, 1e-9 agreement rounding otherwise), plus the full
/// kappa histogram.
inline LevelSetResult level_set_count(const Table& table,
                                      const DisagreementScheme& scheme,
                                      const FiberOptions& opt = {}) {
  detail::check_scheme_levels(table, scheme);
  const MarginVector margins = table.fiber_statistic();
  const Count n = table.total();
  if (n == 0) throw DegenerateTableError("empty table");
  if (detail::degenerate_margins(margins)) {
    throw DegenerateTableError("kappa undefined: expected agreement equals one");
  }
  std::vector<std::vector<std::int64_t>> weights;
  detail::SchemeKey sk =
      detail::make_scheme_key(table.dims(), scheme, n, weights);
  const std::int64_t target =
      sk.exact ? detail::observed_disagreement_numerator(table, scheme)
               : detail::rounded_agreement_key(
                     detail::dot(table.counts(), sk.dweights), n,
                     sk.pair_factor);

  struct Acc {
    const detail::SchemeKey* sk = nullptr;
    std::int64_t target = 0;
    std::uint64_t size = 0;
    std::uint64_t level = 0;
    std::unordered_map<std::int64_t, std::uint64_t> hist;

    void visit(std::span<const Count> c, std::span<const std::int64_t> s) {
      ++size;
      const std::int64_t k = sk->key(c, s);
      ++hist[k];
      if (k == target) ++level;
    }
    void merge(Acc&& o) {
      size += o.size;
      level += o.level;
      for (const auto& [k, v] : o.hist) hist[k] += v;
    }
  };
  Acc acc =
      detail::fiber_accumulate<Acc>(margins, weights, opt, [&sk, target]() {
        Acc a;
        a.sk = &sk;
        a.target = target;
        return a;
      });

  const std::int64_t d_exp_num =
      scheme.is_rational()
          ? detail::expected_disagreement_numerator(margins, scheme)
          : 0;
  const double d_exp_dbl = detail::expected_disagreement(margins, scheme);

  LevelSetResult out;
  out.fiber_size = acc.size;
  out.level_count = acc.level;
  out.kappa = weighted_kappa(table, scheme);
  out.histogram.reserve(acc.hist.size());
  for (const auto& [k, cnt] : acc.hist) {
    out.histogram.push_back(
        {k, detail::kappa_at_key(sk, k, d_exp_num, d_exp_dbl).value, cnt});
  }
  std::sort(out.histogram.begin(), out.histogram.end(),
            [](const auto& a, const auto& b) { return a.kappa < b.kappa; });
  return out;
}

/// Over the scheme-a level set of the input table, the range of scheme-b
/// kappa and all tables attaining each end.
inline CrossSchemeRange cross_scheme_range(const Table& table,
                                           const DisagreementScheme& scheme_a,
                                           const DisagreementScheme& scheme_b,
                                           const FiberOptions& opt = {}) {
  detail::check_scheme_levels(table, scheme_a);
  detail::check_scheme_levels(table, scheme_b);
  const MarginVector margins = table.fiber_statistic();
  const Count n = table.total();
  if (n == 0) throw DegenerateTableError("empty table");
  if (detail::degenerate_margins(margins)) {
    throw DegenerateTableError("kappa undefined: expected agreement equals one");
  }
  std::vector<std::vector<std::int64_t>> weights;
  detail::SchemeKey ka =
      detail::make_scheme_key(table.dims(), scheme_a, n, weights);
  detail::SchemeKey kb =
      detail::make_scheme_key(table.dims(), scheme_b, n, weights);
  const std::int64_t target =
      ka.exact ? detail::observed_disagreement_numerator(table, scheme_a)
               : detail::rounded_agreement_key(
                     detail::dot(table.counts(), ka.dweights), n,
                     ka.pair_factor);

  struct Acc {
    const detail::SchemeKey* ka = nullptr;
    const detail::SchemeKey* kb = nullptr;
    std::int64_t target = 0;
    std::uint64_t level = 0;
    detail::TieList best;
    detail::TieList worst;

    void visit(std::span<const Count> c, std::span<const std::int64_t> s) {
      if (ka->key(c, s) != target) return;
      ++level;
      const std::int64_t k = kb->key(c, s);
      best.offer(*kb, k, c);
      // Worst end: mirror of offer() with the comparison reversed.
      if (!worst.any || kb->better(worst.key, k)) {
        worst.any = true;
        worst.key = k;
        worst.tables.clear();
        worst.tables.emplace_back(c.begin(), c.end());
      } else if (k == worst.key) {
        worst.tables.emplace_back(c.begin(), c.end());
      }
    }
    void merge(Acc&& o) {
      level += o.level;
      best.merge(*kb, std::move(o.best));
      if (o.worst.any) {
        if (!worst.any || kb->better(worst.key, o.worst.key)) {
          worst = std::move(o.worst);
        } else if (o.worst.key == worst.key) {
          for (auto& t : o.worst.tables) worst.tables.push_back(std::move(t));
        }
      }
    }
  };
  Acc acc = detail::fiber_accumulate<Acc>(margins, weights, opt, [&]() {
    Acc a;
    a.ka = &ka;
    a.kb = &kb;
    a.target = target;
    return a;
  });

  const std::int64_t d_exp_num_b =
      scheme_b.is_rational()
          ? detail::expected_disagreement_numerator(margins, scheme_b)
          : 0;
  const double d_exp_dbl_b = detail::expected_disagreement(margins, scheme_b);

  CrossSchemeRange out;
  out.level_count = acc.level;
  out.min_kappa = detail::kappa_at_key(kb, acc.worst.key, d_exp_num_b, d_exp_dbl_b);
  out.max_kappa = detail::kappa_at_key(kb, acc.best.key, d_exp_num_b, d_exp_dbl_b);
  out.argmin_tables = detail::materialize(table.dims(), std::move(acc.worst.tables));
  out.argmax_tables = detail::materialize(table.dims(), std::move(acc.best.tables));
  return out;
}

/// Global maximum of kappa over the fiber and all attaining tables: the
/// oracle against which the annealing search is validated.
inline MaxKappaResult max_kappa_exhaustive(const Table& table,
                                           const DisagreementScheme& scheme,
                                           const FiberOptions& opt = {}) {
  FiberSummary s = fiber_summary(table, scheme, opt);
  return MaxKappaResult{s.max_kappa, std::move(s.argmax_tables)};
}

/// True iff the graph on the fiber with edges given by applicable signed
/// basis moves is connected.
inline bool connectivity_check(const MarginVector& margins,
                               const MarkovBasis& basis,
                               const FiberOptions& opt = {}) {
  margins.validate();
  if (margins.dims != basis.dims()) {
    throw DimensionError("basis dimensions do not match the margins");
  }
  std::vector<std::vector<Count>> tables;
  enumerate_fiber(
      margins,
      [&tables](std::span<const Count> c) {
        tables.emplace_back(c.begin(), c.end());
      },
      opt);
  if (tables.size() <= 1) return true;
  std::map<std::vector<Count>, std::size_t> index;
  for (std::size_t i = 0; i < tables.size(); ++i) index[tables[i]] = i;
  std::vector<char> seen(tables.size(), 0);
  std::deque<std::size_t> queue;
  seen[0] = 1;
  queue.push_back(0);
  std::size_t reached = 1;
  std::vector<Count> scratch;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (const BasicMove& m : basis.moves()) {
      for (int sign : {+1, -1}) {
        const auto& up = sign > 0 ? m.plus() : m.minus();
        const auto& down = sign > 0 ? m.minus() : m.plus();
        const std::vector<Count>& cur_counts = tables[cur];
        if (cur_counts[down[0]] == 0 || cur_counts[down[1]] == 0) continue;
        scratch = cur_counts;
        ++scratch[up[0]];
        ++scratch[up[1]];
        --scratch[down[0]];
        --scratch[down[1]];
        const auto it = index.find(scratch);
        if (it != index.end() && !seen[it->second]) {
          seen[it->second] = 1;
          ++reached;
          queue.push_back(it->second);
        }
      }
    }
  }
  return reached == tables.size();
}

}  // namespace kappamax
