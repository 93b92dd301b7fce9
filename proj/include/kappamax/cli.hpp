#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kappamax/kappamax.hpp"

namespace kappamax::cli {

using nlohmann::json;

/// Four-decimal display string, the reporting convention for kappa values.
inline std::string display4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

inline json kappa_json(const KappaValue& kv) {
  json j;
  j["value"] = kv.value;
  j["display"] = display4(kv.value);
  if (kv.exact) {
    // kappa = 1 - numerator / denominator
    j["exact"] = {{"numerator", kv.exact->first},
                  {"denominator", kv.exact->second}};
  }
  return j;
}

inline json table_json(const Table& t,
                       const std::vector<std::string>& labels = {}) {
  return table_to_json(t, labels);
}

inline std::uint64_t default_budget() {
  if (const char* env = std::getenv("KAPPAMAX_FIBER_BUDGET")) {
    return std::strtoull(env, nullptr, 10);
  }
  return FiberOptions{}.node_budget;
}

inline int default_threads() {
  if (const char* env = std::getenv("KAPPAMAX_THREADS")) {
    return std::atoi(env);
  }
  return 1;
}

// ---------------------------------------------------------------------------
// kappa: agreement indices of a table under one or more schemes.

struct KappaCmd {
  std::string table_path;
  std::vector<std::string> schemes;
};

inline json run_kappa(const KappaCmd& cmd) {
  const TableFile tf = parse_table(cmd.table_path);
  const Table& t = tf.table;
  std::vector<std::string> schemes = cmd.schemes;
  if (schemes.empty()) {
    schemes = t.raters() == 2
                  ? std::vector<std::string>{"cohen", "quadratic", "linear",
                                             "sqrt"}
                  : std::vector<std::string>{"identity", "quadratic", "linear",
                                             "sqrt"};
  }
  json out;
  out["table"] = {{"raters", t.raters()},
                  {"levels", t.levels()},
                  {"total", t.total()}};
  out["results"] = json::array();
  for (const std::string& name : schemes) {
    json entry;
    entry["scheme"] = name;
    if (name == "cohen") {
      entry["kappa"] = kappa_json(cohen_kappa(t));
      const DisagreementScheme s = identity_scheme(t.levels());
      entry["observed_agreement"] = observed_agreement(t, s);
      entry["expected_agreement"] = expected_agreement(t, s);
    } else {
      const DisagreementScheme s = scheme_from_spec(name, t.levels());
      entry["kappa"] = kappa_json(weighted_kappa(t, s));
      entry["observed_agreement"] = observed_agreement(t, s);
      entry["expected_agreement"] = expected_agreement(t, s);
      entry["is_distance"] = is_distance(s);
    }
    out["results"].push_back(std::move(entry));
  }
  return out;
}

// ---------------------------------------------------------------------------
// max: simulated annealing search for the maximum-kappa table.

struct MaxCmd {
  std::string table_path;
  std::string scheme = "quadratic";
  AnnealConfig config;
  int restarts = 1;
};

inline json run_max(const MaxCmd& cmd) {
  const TableFile tf = parse_table(cmd.table_path);
  const Table& t = tf.table;
  const DisagreementScheme s = scheme_from_spec(cmd.scheme, t.levels());
  if (cmd.restarts < 1) throw Error("restarts must be positive");
  const MarkovBasis basis = basis_for(t.dims());

  std::optional<AnnealResult> best;
  json runs = json::array();
  for (int r = 0; r < cmd.restarts; ++r) {
    AnnealConfig cfg = cmd.config;
    cfg.seed = cmd.config.seed + static_cast<std::uint64_t>(r);
    AnnealResult res = anneal_max_kappa(t, s, cfg, &basis);
    runs.push_back({{"seed", res.seed},
                    {"kappa", res.best_kappa.value},
                    {"steps_total", res.steps_total},
                    {"steps_last_change", res.steps_last_change},
                    {"accepted_moves", res.accepted_moves}});
    if (!best || res.best_kappa.value > best->best_kappa.value) {
      best = std::move(res);
    }
  }
  json out;
  out["scheme"] = cmd.scheme;
  out["input_kappa"] = kappa_json(weighted_kappa(t, s));
  out["best_kappa"] = kappa_json(best->best_kappa);
  out["best_table"] = table_json(best->best_table, tf.labels);
  out["steps_total"] = best->steps_total;
  out["steps_last_change"] = best->steps_last_change;
  out["accepted_moves"] = best->accepted_moves;
  out["seed"] = best->seed;
  out["restarts"] = cmd.restarts;
  out["basis_size"] = basis.size();
  return out;
}

// ---------------------------------------------------------------------------
// fiber: exhaustive enumeration reports.

struct FiberCmd {
  std::string table_path;
  std::string scheme = "linear";
  bool level_set = false;
  bool connectivity = false;
  std::vector<std::string> cross;  // two scheme specs when present
  std::string histogram_csv;
  std::uint64_t budget = 0;  // 0: default / environment
  int threads = 0;           // 0: default / environment
};

inline json run_fiber(const FiberCmd& cmd) {
  const TableFile tf = parse_table(cmd.table_path);
  const Table& t = tf.table;
  FiberOptions opt;
  opt.node_budget = cmd.budget > 0 ? cmd.budget : default_budget();
  opt.threads = cmd.threads > 0 ? cmd.threads : default_threads();

  json out;
  out["table"] = {{"raters", t.raters()},
                  {"levels", t.levels()},
                  {"total", t.total()}};
  if (!cmd.cross.empty()) {
    if (cmd.cross.size() != 2) {
      throw Error("--cross needs exactly two schemes");
    }
    const DisagreementScheme sa = scheme_from_spec(cmd.cross[0], t.levels());
    const DisagreementScheme sb = scheme_from_spec(cmd.cross[1], t.levels());
    const CrossSchemeRange r = cross_scheme_range(t, sa, sb, opt);
    json cross;
    cross["scheme_a"] = cmd.cross[0];
    cross["scheme_b"] = cmd.cross[1];
    cross["level_set_size"] = r.level_count;
    cross["min_kappa"] = kappa_json(r.min_kappa);
    cross["max_kappa"] = kappa_json(r.max_kappa);
    cross["argmin_tables"] = json::array();
    for (const Table& x : r.argmin_tables) {
      cross["argmin_tables"].push_back(table_json(x));
    }
    cross["argmax_tables"] = json::array();
    for (const Table& x : r.argmax_tables) {
      cross["argmax_tables"].push_back(table_json(x));
    }
    out["cross"] = std::move(cross);
    return out;
  }

  const DisagreementScheme s = scheme_from_spec(cmd.scheme, t.levels());
  out["scheme"] = cmd.scheme;
  if (cmd.level_set) {
    const LevelSetResult r = level_set_count(t, s, opt);
    out["fiber_size"] = r.fiber_size;
    out["kappa"] = kappa_json(r.kappa);
    out["level_set_size"] = r.level_count;
    out["distinct_kappa_values"] = r.histogram.size();
    if (!cmd.histogram_csv.empty()) {
      std::ofstream h(cmd.histogram_csv);
      h << "key,kappa,count\n";
      for (const auto& e : r.histogram) {
        h << e.key << "," << e.kappa << "," << e.count << "\n";
      }
    }
  } else {
    const FiberSummary r = fiber_summary(t, s, opt);
    out["fiber_size"] = r.size;
    out["max_kappa"] = kappa_json(r.max_kappa);
    out["argmax_tables"] = json::array();
    for (const Table& x : r.argmax_tables) {
      out["argmax_tables"].push_back(table_json(x));
    }
    out["distinct_kappa_values"] = r.histogram.size();
    if (!cmd.histogram_csv.empty()) {
      std::ofstream h(cmd.histogram_csv);
      h << "key,kappa,count\n";
      for (const auto& e : r.histogram) {
        h << e.key << "," << e.kappa << "," << e.count << "\n";
      }
    }
  }
  if (cmd.connectivity) {
    const MarkovBasis basis = basis_for(t.dims());
    out["connected"] = connectivity_check(t.fiber_statistic(), basis, opt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// basis: Markov basis cardinality and optional move dump.

struct BasisCmd {
  int raters = 2;
  int levels = 0;
  bool dump = false;
};

inline json run_basis(const BasisCmd& cmd) {
  const MarkovBasis basis =
      basis_for(Dims::checked(cmd.raters, cmd.levels));
  json out;
  out["raters"] = cmd.raters;
  out["levels"] = cmd.levels;
  out["size"] = basis.size();
  out["diagonal_moves"] = diagonal_moves(basis.dims()).size();
  if (cmd.dump) {
    json moves = json::array();
    std::vector<int> cell(cmd.raters);
    const auto cell_json = [&](CellIndex c) {
      unflatten(basis.dims(), c, cell);
      return json(cell);
    };
    for (const BasicMove& m : basis.moves()) {
      moves.push_back({{"plus", {cell_json(m.plus()[0]), cell_json(m.plus()[1])}},
                       {"minus",
                        {cell_json(m.minus()[0]), cell_json(m.minus()[1])}}});
    }
    out["moves"] = std::move(moves);
  }
  return out;
}

// ---------------------------------------------------------------------------
// simulate: Monte Carlo study of annealing convergence times.

struct SimulateCmd {
  int raters = 2;
  int levels = 3;
  Count sample_size = 20;
  std::string scheme = "quadratic";
  int replicates = 1000;
  std::uint64_t seed = 1;
  bool non_homogeneous = false;
  std::string scenario_path;  // optional JSON file with a scenario array
  std::string format = "json";
  int threads = 0;
  AnnealConfig anneal;
};

inline SchemeKind scheme_kind_from_name(const std::string& name) {
  if (name == "quadratic") return SchemeKind::quadratic;
  if (name == "linear") return SchemeKind::linear;
  if (name == "sqrt") return SchemeKind::sqrt;
  if (name == "identity") return SchemeKind::identity;
  throw Error("unknown scheme for simulation: " + name);
}

inline Scenario scenario_from_json(const json& j, const SimulateCmd& defaults) {
  Scenario sc;
  sc.raters = j.value("raters", defaults.raters);
  sc.levels = j.value("levels", defaults.levels);
  sc.sample_size = j.value("sample_size", defaults.sample_size);
  sc.scheme = scheme_kind_from_name(j.value("scheme", defaults.scheme));
  sc.replicates = j.value("replicates", defaults.replicates);
  sc.base_seed = j.value("base_seed", defaults.seed);
  sc.anneal = defaults.anneal;
  if (j.contains("tau0")) sc.anneal.tau0 = j["tau0"].get<double>();
  if (j.contains("decay")) sc.anneal.decay = j["decay"].get<double>();
  if (j.contains("stop_c")) sc.anneal.stop_c = j["stop_c"].get<std::int64_t>();
  if (j.contains("max_steps")) {
    sc.anneal.max_steps = j["max_steps"].get<std::int64_t>();
  }
  if (j.contains("profiles")) {
    sc.profiles = j["profiles"].get<std::vector<std::vector<double>>>();
  } else {
    const bool homogeneous =
        j.value("marginals", defaults.non_homogeneous ? "non-homogeneous"
                                                      : "homogeneous") ==
        "homogeneous";
    sc.profiles = default_profiles(sc.raters, sc.levels, homogeneous);
  }
  return sc;
}

inline json run_simulate(const SimulateCmd& cmd) {
  std::vector<Scenario> scenarios;
  if (!cmd.scenario_path.empty()) {
    json j;
    try {
      j = json::parse(read_file(cmd.scenario_path));
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid scenario JSON: ") + e.what());
    }
    if (j.is_array()) {
      for (const auto& item : j) scenarios.push_back(scenario_from_json(item, cmd));
    } else {
      scenarios.push_back(scenario_from_json(j, cmd));
    }
  } else {
    Scenario sc;
    sc.raters = cmd.raters;
    sc.levels = cmd.levels;
    sc.sample_size = cmd.sample_size;
    sc.scheme = scheme_kind_from_name(cmd.scheme);
    sc.replicates = cmd.replicates;
    sc.base_seed = cmd.seed;
    sc.anneal = cmd.anneal;
    sc.profiles =
        default_profiles(sc.raters, sc.levels, !cmd.non_homogeneous);
    scenarios.push_back(std::move(sc));
  }
  const int threads = cmd.threads > 0 ? cmd.threads : default_threads();
  json rows = json::array();
  for (const Scenario& sc : scenarios) {
    const ScenarioStats stats = run_scenario(sc, threads);
    rows.push_back({{"weight", scheme_kind_name(sc.scheme)},
                    {"raters", sc.raters},
                    {"k", sc.levels},
                    {"N", sc.sample_size},
                    {"mean", stats.mean},
                    {"sd", stats.sd},
                    {"q99", stats.q99},
                    {"min", stats.min_time},
                    {"max", stats.max_time},
                    {"replicates", sc.replicates},
                    {"degenerate_resamples", stats.degenerate_resamples},
                    {"base_seed", sc.base_seed}});
  }
  json out;
  out["rows"] = std::move(rows);
  return out;
}

inline std::string simulate_csv(const json& out) {
  std::string csv = "weight,k,N,mean,sd,q99\n";
  for (const auto& row : out["rows"]) {
    csv += row["weight"].get<std::string>();
    csv += ",";
    csv += std::to_string(row["k"].get<int>());
    csv += ",";
    csv += std::to_string(row["N"].get<Count>());
    char buf[64];
    std::snprintf(buf, sizeof(buf), ",%.1f,%.1f,", row["mean"].get<double>(),
                  row["sd"].get<double>());
    csv += buf;
    csv += std::to_string(row["q99"].get<std::int64_t>());
    csv += "\n";
  }
  return csv;
}

// ---------------------------------------------------------------------------

inline json error_json(const std::string& kind, const std::string& message) {
  return json{{"error", {{"kind", kind}, {"message", message}}}};
}

/// Assembles the app, runs one subcommand, and prints JSON to `out`.
/// Exit codes: 0 success, 2 bad dimensions, 3 budget exceeded,
/// 4 degenerate table, 5 parse failure, 1 other errors.
inline int run_cli(int argc, const char* const* argv,
                   std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"weighted kappa agreement indices, Markov bases, fiber "
               "enumeration, and maximum-agreement search"};
  app.require_subcommand(1);

  KappaCmd kappa_cmd;
  CLI::App* kappa = app.add_subcommand(
      "kappa", "compute agreement indices for a table");
  kappa->add_option("--table", kappa_cmd.table_path, "table file (CSV or JSON)")
      ->required();
  kappa->add_option("--scheme", kappa_cmd.schemes,
                    "cohen|quadratic|linear|sqrt|identity or a CSV weight "
                    "matrix path (repeatable; default: all builtins)");

  MaxCmd max_cmd;
  CLI::App* max = app.add_subcommand(
      "max", "simulated annealing search for the maximum-kappa table");
  max->add_option("--table", max_cmd.table_path, "table file")->required();
  max->add_option("--scheme", max_cmd.scheme, "weighting scheme");
  max->add_option("--tau0", max_cmd.config.tau0, "initial temperature");
  max->add_option("--decay", max_cmd.config.decay, "geometric decay factor");
  max->add_option("--stop-c", max_cmd.config.stop_c,
                  "stagnation window (0: max(10 * basis size, 1000))");
  max->add_option("--max-steps", max_cmd.config.max_steps, "hard step cap");
  max->add_option("--seed", max_cmd.config.seed, "random seed");
  max->add_option("--restarts", max_cmd.restarts,
                  "independent runs with consecutive seeds");

  FiberCmd fiber_cmd;
  CLI::App* fiber = app.add_subcommand(
      "fiber", "exhaustively enumerate all tables with the same margins");
  fiber->add_option("--table", fiber_cmd.table_path, "table file")->required();
  fiber->add_option("--scheme", fiber_cmd.scheme, "weighting scheme");
  fiber->add_flag("--level-set", fiber_cmd.level_set,
                  "count tables sharing the input's kappa");
  fiber->add_option("--cross", fiber_cmd.cross,
                    "two schemes: range of the second over the level set of "
                    "the first")
      ->expected(2);
  fiber->add_flag("--connectivity", fiber_cmd.connectivity,
                  "check that basic moves connect the fiber");
  fiber->add_option("--histogram", fiber_cmd.histogram_csv,
                    "write the kappa histogram to a CSV file");
  fiber->add_option("--budget", fiber_cmd.budget,
                    "node budget (or KAPPAMAX_FIBER_BUDGET)");
  fiber->add_option("--threads", fiber_cmd.threads,
                    "worker threads (or KAPPAMAX_THREADS)");

  BasisCmd basis_cmd;
  CLI::App* basis = app.add_subcommand("basis", "Markov basis of basic moves");
  basis->add_option("--raters", basis_cmd.raters, "number of raters");
  basis->add_option("--levels", basis_cmd.levels, "number of levels")
      ->required();
  basis->add_flag("--dump", basis_cmd.dump, "list all moves");

  SimulateCmd sim_cmd;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Monte Carlo study of annealing convergence times");
  sim->add_option("--raters", sim_cmd.raters, "number of raters");
  sim->add_option("--levels", sim_cmd.levels, "number of levels");
  sim->add_option("--sample-size,-N", sim_cmd.sample_size,
                  "observations per table");
  sim->add_option("--scheme", sim_cmd.scheme, "weighting scheme");
  sim->add_option("--replicates", sim_cmd.replicates, "tables per scenario");
  sim->add_option("--seed", sim_cmd.seed, "base seed");
  sim->add_flag("--non-homogeneous", sim_cmd.non_homogeneous,
                "tilted marginal profiles instead of uniform");
  sim->add_option("--scenario", sim_cmd.scenario_path,
                  "JSON file with one scenario or an array of scenarios");
  sim->add_option("--format", sim_cmd.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sim->add_option("--threads", sim_cmd.threads,
                  "worker threads (or KAPPAMAX_THREADS)");
  sim->add_option("--tau0", sim_cmd.anneal.tau0, "initial temperature");
  sim->add_option("--decay", sim_cmd.anneal.decay, "geometric decay factor");
  sim->add_option("--stop-c", sim_cmd.anneal.stop_c, "stagnation window");
  sim->add_option("--max-steps", sim_cmd.anneal.max_steps, "hard step cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    json result;
    if (*kappa) {
      result = run_kappa(kappa_cmd);
    } else if (*max) {
      result = run_max(max_cmd);
    } else if (*fiber) {
      result = run_fiber(fiber_cmd);
    } else if (*basis) {
      result = run_basis(basis_cmd);
    } else if (*sim) {
      result = run_simulate(sim_cmd);
      if (sim_cmd.format == "csv") {
        out << simulate_csv(result);
        return 0;
      }
    }
    out << result.dump(2) << "\n";
    return 0;
  } catch (const BudgetError& e) {
    out << error_json("budget_exceeded", e.what()).dump(2) << "\n";
    return 3;
  } catch (const DegenerateTableError& e) {
    out << error_json("degenerate_table", e.what()).dump(2) << "\n";
    return 4;
  } catch (const ParseError& e) {
    out << error_json("parse_error", e.what()).dump(2) << "\n";
    return 5;
  } catch (const DimensionError& e) {
    out << error_json("dimension_error", e.what()).dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    out << error_json("error", e.what()).dump(2) << "\n";
    return 1;
  }
}

}  // namespace kappamax::cli
