#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "kappamax/anneal.hpp"
#include "kappamax/errors.hpp"
#include "kappamax/rng.hpp"
#include "kappamax/table.hpp"
#include "kappamax/weights.hpp"

namespace kappamax {

/// One Monte Carlo scenario: tables are drawn from a multinomial with cell
/// probabilities given by the product of per-rater marginal profiles, then
/// annealed to the maximum-agreement configuration; the stopping time is the
/// quantity under study.
struct Scenario {
  int raters = 2;
  int levels = 3;
  Count sample_size = 20;
  std::vector<std::vector<double>> profiles;  // r probability vectors
  SchemeKind scheme = SchemeKind::quadratic;
  int replicates = 1000;
  std::uint64_t base_seed = 1;
  AnnealConfig anneal;  // seed field is overridden per replicate
};

struct ScenarioStats {
  double mean = 0.0;
  double sd = 0.0;           // sample standard deviation; 0 for one replicate
  std::int64_t q99 = 0;      // nearest-rank 99th percentile
  std::int64_t min_time = 0;
  std::int64_t max_time = 0;
  int degenerate_resamples = 0;
};

inline DisagreementScheme scheme_for_kind(SchemeKind kind, int levels) {
  switch (kind) {
    case SchemeKind::quadratic: return quadratic_scheme(levels);
    case SchemeKind::linear: return linear_scheme(levels);
    case SchemeKind::sqrt: return sqrt_scheme(levels);
    case SchemeKind::identity: return identity_scheme(levels);
    case SchemeKind::custom: break;
  }
  throw Error("custom schemes need an explicit weight matrix");
}

namespace detail {

inline void validate_profiles(const Scenario& sc) {
  if (static_cast<int>(sc.profiles.size()) != sc.raters) {
    throw DimensionError("need one marginal profile per rater");
  }
  for (const auto& p : sc.profiles) {
    if (static_cast<int>(p.size()) != sc.levels) {
      throw DimensionError("profile length does not match the level count");
    }
    double s = 0.0;
    for (double v : p) {
      if (v < 0.0) throw DimensionError("negative profile entry");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) {
      throw DimensionError("profile does not sum to one");
    }
  }
}

}  // namespace detail

/// Default marginal profiles. Homogeneous: uniform for every rater.
/// Non-homogeneous: rater profiles interpolate linearly between a low-tilted
/// profile mu and a high-tilted profile nu, modelling raters that tend to
/// choose lower resp. higher levels. For k = 3 the endpoints are
/// mu = (2/5, 2/5, 1/5) and nu = (1/5, 2/5, 2/5); otherwise
/// mu_i proportional to (k - i + 1) + k and nu_i proportional to i + k.
inline std::vector<std::vector<double>> default_profiles(int raters,
                                                         int levels,
                                                         bool homogeneous) {
  if (raters < 2) throw DimensionError("need at least 2 raters");
  if (levels < 2) throw DimensionError("unsupported level count");
  std::vector<std::vector<double>> out;
  out.reserve(raters);
  if (homogeneous) {
    const std::vector<double> uniform(levels, 1.0 / levels);
    for (int a = 0; a < raters; ++a) out.push_back(uniform);
    return out;
  }
  std::vector<double> mu(levels), nu(levels);
  if (levels == 3) {
    mu = {2.0 / 5, 2.0 / 5, 1.0 / 5};
    nu = {1.0 / 5, 2.0 / 5, 2.0 / 5};
  } else {
    double smu = 0.0, snu = 0.0;
    for (int i = 1; i <= levels; ++i) {
      mu[i - 1] = static_cast<double>(levels - i + 1 + levels);
      nu[i - 1] = static_cast<double>(i + levels);
      smu += mu[i - 1];
      snu += nu[i - 1];
    }
    for (int i = 0; i < levels; ++i) {
      mu[i] /= smu;
      nu[i] /= snu;
    }
  }
  for (int a = 0; a < raters; ++a) {
    const double lambda = static_cast<double>(a) / (raters - 1);
    std::vector<double> p(levels);
    double s = 0.0;
    for (int i = 0; i < levels; ++i) {
      p[i] = (1.0 - lambda) * mu[i] + lambda * nu[i];
      s += p[i];
    }
    for (int i = 0; i < levels; ++i) p[i] /= s;
    out.push_back(std::move(p));
  }
  return out;
}

/// One multinomial draw of `sample_size` observations with cell probability
/// equal to the product of the profile entries. Deterministic given
/// (base seed, replicate, attempt).
inline Table sample_table(const Scenario& sc, int replicate, int attempt = 0) {
  detail::validate_profiles(sc);
  const Dims dims = Dims::checked(sc.raters, sc.levels);
  std::mt19937_64 rng(
      derive_seed(sc.base_seed, 2 * static_cast<std::uint64_t>(replicate),
                  attempt));
  std::vector<std::vector<double>> cumulative(sc.raters);
  for (int a = 0; a < sc.raters; ++a) {
    cumulative[a].resize(sc.levels);
    double s = 0.0;
    for (int i = 0; i < sc.levels; ++i) {
      s += sc.profiles[a][i];
      cumulative[a][i] = s;
    }
    cumulative[a][sc.levels - 1] = 1.0;
  }
  std::vector<Count> counts(dims.cell_count(), 0);
  std::vector<int> cell(sc.raters);
  for (Count obs = 0; obs < sc.sample_size; ++obs) {
    for (int a = 0; a < sc.raters; ++a) {
      const double u = uniform_unit(rng);
      int i = 0;
      while (u >= cumulative[a][i]) ++i;
      cell[a] = i;
    }
    ++counts[flatten(dims, cell)];
  }
  return Table(dims, std::move(counts));
}

/// Runs all replicates of a scenario and aggregates the stopping times.
/// Degenerate draws (kappa undefined) are resampled and counted. Replicates
/// are independent, so thread parallelism does not affect the result.
inline ScenarioStats run_scenario(const Scenario& sc, int threads = 1) {
  detail::validate_profiles(sc);
  if (sc.replicates < 1) throw Error("need at least one replicate");
  if (sc.sample_size < 1) throw Error("need a positive sample size");
  const Dims dims = Dims::checked(sc.raters, sc.levels);
  const DisagreementScheme scheme = scheme_for_kind(sc.scheme, sc.levels);
  const MarkovBasis basis = basis_for(dims);

  std::vector<std::int64_t> times(sc.replicates, 0);
  std::atomic<int> degenerate{0};
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= sc.replicates || failed.load()) return;
      try {
        int attempt = 0;
        for (;;) {
          const Table t = sample_table(sc, i, attempt);
          if (t.total() == 0 ||
              detail::degenerate_margins(t.fiber_statistic())) {
            ++attempt;
            degenerate.fetch_add(1);
            if (attempt > 1000) {
              throw Error("scenario keeps producing degenerate tables");
            }
            continue;
          }
          AnnealConfig cfg = sc.anneal;
          cfg.seed = derive_seed(sc.base_seed,
                                 2 * static_cast<std::uint64_t>(i) + 1,
                                 attempt);
          const AnnealResult res = anneal_max_kappa(t, scheme, cfg, &basis);
          times[i] = res.steps_total;
          break;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const int nworkers = std::max(1, std::min(threads, sc.replicates));
  if (nworkers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  ScenarioStats stats;
  stats.degenerate_resamples = degenerate.load();
  double mean = 0.0;
  for (std::int64_t t : times) mean += static_cast<double>(t);
  mean /= static_cast<double>(sc.replicates);
  stats.mean = mean;
  if (sc.replicates > 1) {
    double ss = 0.0;
    for (std::int64_t t : times) {
      const double d = static_cast<double>(t) - mean;
      ss += d * d;
    }
    stats.sd = std::sqrt(ss / static_cast<double>(sc.replicates - 1));
  }
  std::vector<std::int64_t> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(0.99 * static_cast<double>(sc.replicates)));
  stats.q99 = sorted[std::max<std::size_t>(rank, 1) - 1];
  stats.min_time = sorted.front();
  stats.max_time = sorted.back();
  return stats;
}

}  // namespace kappamax
