#pragma once

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uwbpc/channel.hpp"
#include "uwbpc/config.hpp"
#include "uwbpc/gains.hpp"
#include "uwbpc/io.hpp"
#include "uwbpc/lsa.hpp"
#include "uwbpc/montecarlo.hpp"
#include "uwbpc/nash.hpp"
#include "uwbpc/pareto.hpp"

namespace uwbpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSolver = 2;

/// Everything a run needs besides the subcommand: network parameters plus
/// solver and experiment controls.
struct Scenario {
  NetworkConfig network;
  SolverOptions solver;
  std::optional<int> realizations;
  unsigned threads = 0;
};

namespace detail {

inline double parse_real(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "+inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
  return x;
}

inline long long parse_integer(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
  const long long x = parse_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(key, "integer out of range");
  }
  return static_cast<int>(x);
}

struct KeyInfo {
  std::string section;
  void (*apply)(Scenario&, const std::string& key, const std::string& value);
};

// Flat key namespace; sections only group keys in the file.
inline const std::map<std::string, KeyInfo, std::less<>>& keys() {
  static const std::map<std::string, KeyInfo, std::less<>> table{
      {"K", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.users = parse_int(k, v); }}},
      {"N_f", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.frames = parse_int(k, v); }}},
      {"N_c", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.chips = parse_int(k, v); }}},
      {"L", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.paths = parse_int(k, v); }}},
      {"sigma2", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.noise_power = parse_real(k, v); }}},
      {"p_max", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.p_max = parse_real(k, v); }}},
      {"p_min", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.p_min = parse_real(k, v); }}},
      {"rate", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.rate = parse_real(k, v); }}},
      {"D", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.info_bits = parse_int(k, v); }}},
      {"M", {"network", [](Scenario& s, const std::string& k, const std::string& v) { s.network.total_bits = parse_int(k, v); }}},
      {"dist_min", {"channel", [](Scenario& s, const std::string& k, const std::string& v) { s.network.dist_min = parse_real(k, v); }}},
      {"dist_max", {"channel", [](Scenario& s, const std::string& k, const std::string& v) { s.network.dist_max = parse_real(k, v); }}},
      {"pdp_decay", {"channel", [](Scenario& s, const std::string& k, const std::string& v) { s.network.pdp_decay = parse_real(k, v); }}},
      {"path_loss_exp", {"channel", [](Scenario& s, const std::string& k, const std::string& v) { s.network.path_loss_exp = parse_real(k, v); }}},
      {"seed", {"channel", [](Scenario& s, const std::string& k, const std::string& v) {
         const long long x = parse_integer(k, v);
         if (x < 0) throw ConfigError(k, "seed must be >= 0");
         s.network.seed = static_cast<std::uint64_t>(x);
       }}},
      {"schedule", {"solver", [](Scenario& s, const std::string&, const std::string& v) { s.solver.schedule = parse_schedule(v); }}},
      {"tolerance", {"solver", [](Scenario& s, const std::string& k, const std::string& v) {
         s.solver.tolerance = parse_real(k, v);
         if (!(s.solver.tolerance > 0.0)) throw ConfigError(k, "tolerance must be > 0");
       }}},
      {"max_iterations", {"solver", [](Scenario& s, const std::string& k, const std::string& v) {
         s.solver.max_iterations = parse_int(k, v);
         if (s.solver.max_iterations < 1) throw ConfigError(k, "max_iterations must be >= 1");
       }}},
      {"realizations", {"experiment", [](Scenario& s, const std::string& k, const std::string& v) {
         s.realizations = parse_int(k, v);
         if (*s.realizations < 1) throw ConfigError(k, "realization count must be >= 1");
       }}},
      {"threads", {"experiment", [](Scenario& s, const std::string& k, const std::string& v) {
         const int t = parse_int(k, v);
         if (t < 0) throw ConfigError(k, "threads must be >= 0");
         s.threads = static_cast<unsigned>(t);
       }}},
  };
  return table;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Sets one key (bare, or `section.key`) on a scenario.
inline void apply_setting(Scenario& s, const std::string& raw_key, const std::string& value) {
  std::string key = detail::trim(raw_key);
  std::string section;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  const auto it = detail::keys().find(key);
  if (it == detail::keys().end()) throw ConfigError(key, "unknown configuration key");
  if (!section.empty() && section != it->second.section) {
    throw ConfigError(key, "key belongs to section [" + it->second.section + "], not [" + section + "]");
  }
  it->second.apply(s, key, detail::trim(value));
}

/// Applies a `KEY=VALUE` override.
inline void apply_override(Scenario& s, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must have the form KEY=VALUE");
  apply_setting(s, assignment.substr(0, eq), assignment.substr(eq + 1));
}

/// Parses an INI-style scenario stream: optional [network], [channel],
/// [solver] and [experiment] sections of `key = value` lines.
inline Scenario parse_scenario(std::istream& in, const std::string& origin = "<config>") {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("", origin + ": " + e.message() + " at line " + std::to_string(e.line()));
  }
  Scenario s;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      apply_setting(s, name, node.data());
      continue;
    }
    static const std::vector<std::string> sections{"network", "channel", "solver", "experiment"};
    if (std::find(sections.begin(), sections.end(), name) == sections.end()) {
      throw ConfigError(name, "unknown section");
    }
    for (const auto& [key, value] : node) apply_setting(s, name + "." + key, value.data());
  }
  s.network.validate_scalars();
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_scenario(in, path);
}

/// Network parameters of a config file; omitted optional fields keep their
/// defaults. K, N_f, N_c and L are checked when a run needs them.
inline NetworkConfig load_config(const std::string& path) { return load_scenario(path).network; }

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::vector<mc::IntPair> parse_pairs(const std::string& key, const std::string& v) {
  std::vector<mc::IntPair> out;
  for (const std::string& item : split(v, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ConfigError(key, "expected A:B pairs, got '" + item + "'");
    out.emplace_back(parse_int(key, parts[0]), parse_int(key, parts[1]));
  }
  return out;
}

// --grid axis=list for experiments.
inline void apply_grid(mc::ExperimentSpec& spec, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(assignment, "grid must have the form AXIS=V1,V2,...");
  const std::string axis = trim(assignment.substr(0, eq));
  const std::string list = assignment.substr(eq + 1);
  if (axis == "rho") {
    spec.rho.clear();
    for (const auto& x : split(list, ',')) spec.rho.push_back(parse_real(axis, x));
  } else if (axis == "N_f") {
    spec.frames.clear();
    for (const auto& x : split(list, ',')) spec.frames.push_back(parse_int(axis, x));
  } else if (axis == "zeta_db") {
    spec.zeta_db.clear();
    for (const auto& x : split(list, ',')) spec.zeta_db.push_back(parse_real(axis, x));
  } else if (axis == "N_c:N_f") {
    spec.chips_frames = parse_pairs(axis, list);
  } else if (axis == "L:K") {
    spec.paths_users = parse_pairs(axis, list);
  } else if (axis == "N_f:K") {
    spec.frames_users = parse_pairs(axis, list);
  } else if (axis == "max_paths") {
    spec.max_paths = parse_int(axis, list);
  } else {
    throw ConfigError(axis, "unknown grid axis");
  }
}

inline void emit(const io::json& doc, const std::string& out_dir, const std::string& name, std::ostream& out) {
  if (out_dir.empty()) {
    out << doc.dump(2) << "\n";
    return;
  }
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/" + name + ".json";
  std::ofstream os(path);
  if (!os) throw ConfigError("out", "cannot write " + path);
  os << doc.dump(2) << "\n";
}

}  // namespace detail

/// Front end: `uwbpc {solve|lsa|pareto|experiment} [options]`. Returns 0 on
/// success, 1 on configuration errors, 2 on solver failure or
/// non-convergence.
inline int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                              std::ostream& err = std::cerr) {
  CLI::App app{"Energy-efficient power control for multipath impulse-radio UWB uplinks", "uwbpc"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::string schedule;
  bool dump_gains = false;
  int verbosity = 0;
  std::string experiment_id;
  std::vector<std::string> grid;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Scenario file (INI-style key = value)");
    sub->add_option("--set", overrides, "Override KEY=VALUE (repeatable)")->take_all()->expected(1, -1);
    sub->add_option("--out", out_dir, "Output directory (default: JSON to stdout)");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--schedule", schedule, "Best-response order: sync or seq");
    sub->add_flag("-v,--verbose", verbosity, "Verbosity");
  };
  CLI::App* solve = app.add_subcommand("solve", "Draw one channel and solve the Nash equilibrium");
  common(solve);
  solve->add_flag("--dump-gains", dump_gains, "Include the channel gains in the output");
  CLI::App* lsa = app.add_subcommand("lsa", "Large-system predictions");
  common(lsa);
  CLI::App* pareto = app.add_subcommand("pareto", "Social optimum and its comparison with the Nash equilibrium");
  common(pareto);
  pareto->add_flag("--dump-gains", dump_gains, "Include the channel gains in the output");
  CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo experiment (writes CSV + JSON)");
  common(experiment);
  experiment->add_option("id", experiment_id, "table1 | table2 | fig3 | fig4 | fig5 | fig6")
      ->required()
      ->check(CLI::IsMember(mc::experiment_ids()));
  experiment->add_option("--realizations", realizations, "Channel realizations per grid point");
  experiment->add_option("--grid", grid, "Grid axis AXIS=V1,V2,... (repeatable)")->take_all()->expected(1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Scenario sc = config_path.empty() ? Scenario{} : load_scenario(config_path);
    for (const std::string& o : overrides) apply_override(sc, o);
    if (seed) sc.network.seed = *seed;
    if (!schedule.empty()) sc.solver.schedule = parse_schedule(schedule);
    sc.network.validate_scalars();
    NetworkConfig& cfg = sc.network;

    if (*solve) {
      cfg.validate();
      Rng rng = make_stream(cfg.seed, 0);
      const ChannelRealization ch = generate_channels(cfg, rng);
      const GainSet g = compute_gains(ch, cfg);
      const EquilibriumResult eq = solve_nash(g, cfg, sc.solver);
      io::json doc = {{"config", io::to_json(cfg)}, {"equilibrium", io::to_json(eq)}, {"h", io::numbers(ch.h)}};
      if (cfg.frames < kRegulatoryMinFrames) doc["warnings"].push_back("N_f below 5: SINR approximation is coarse");
      if (dump_gains) {
        doc["channel"] = io::to_json(ch);
        doc["gains"] = io::to_json(g);
      }
      detail::emit(doc, out_dir, "solve", out);
      if (!eq.converged) {
        err << "uwbpc: best-response dynamics did not converge in " << eq.iterations << " iterations\n";
        return kExitSolver;
      }
      return kExitOk;
    }

    if (*lsa) {
      if (cfg.users < 1) throw ConfigError("K", "number of users must be >= 1");
      if (cfg.chips < 1) throw ConfigError("N_c", "chips per frame must be >= 1");
      if (cfg.paths < 1) throw ConfigError("L", "number of paths must be >= 1");
      const double rho = load_factor(cfg.paths, cfg.chips);
      io::json doc = {{"config", io::to_json(cfg)}};
      if (cfg.frames >= 1) {
        Rng rng = make_stream(cfg.seed, 0);
        const ChannelRealization ch = generate_channels(cfg, rng);
        const LsaPrediction pred = predict_equilibrium(ch.h, cfg);
        doc["prediction"] = io::to_json(pred);
        doc["h"] = io::numbers(ch.h);
      } else {
        LsaPrediction pred;
        pred.rho = rho;
        pred.n_f_min = min_frames(rho, cfg.users, cfg.total_bits);
        pred.gamma_bar_star = gamma_bar_star(cfg.total_bits);
        doc["prediction"] = {{"rho", pred.rho},
                             {"N_f_min", pred.n_f_min},
                             {"gamma_bar_star_db", to_db(pred.gamma_bar_star)},
                             {"frame_requirement", frame_requirement(rho, cfg.users, cfg.total_bits)}};
      }
      detail::emit(doc, out_dir, "lsa", out);
      return kExitOk;
    }

    if (*pareto) {
      cfg.validate();
      Rng rng = make_stream(cfg.seed, 0);
      const ChannelRealization ch = generate_channels(cfg, rng);
      const GainSet g = compute_gains(ch, cfg);
      const EquilibriumResult eq = solve_nash(g, cfg, sc.solver);
      const SocialOptimum so = social_optimum(g, cfg);
      const SocialOptimum search = balanced_sinr_search(g, cfg);
      double u_nash = 0.0;
      for (double u : eq.utility) u_nash += u;
      io::json doc = {{"config", io::to_json(cfg)},
                      {"social_optimum", io::to_json(so)},
                      {"balanced_search", io::to_json(search)},
                      {"equilibrium", io::to_json(eq)},
                      {"sum_utility_nash", u_nash},
                      {"h", io::numbers(ch.h)}};
      if (so.feasible) doc["sum_utility_social_optimum"] = sum_utility(g, so.p_opt, cfg);
      if (search.feasible) doc["sum_utility_balanced_search"] = sum_utility(g, search.p_opt, cfg);
      if (dump_gains) doc["gains"] = io::to_json(g);
      detail::emit(doc, out_dir, "pareto", out);
      if (!eq.converged) {
        err << "uwbpc: best-response dynamics did not converge in " << eq.iterations << " iterations\n";
        return kExitSolver;
      }
      return kExitOk;
    }

    // experiment
    mc::ExperimentSpec spec = mc::default_spec(experiment_id);
    // The experiment fixes the dimensions it sweeps; the scenario supplies
    // the rest, and any dimension the scenario sets explicitly wins.
    const NetworkConfig fixed = spec.base;
    spec.base = cfg;
    if (cfg.users == 0) spec.base.users = fixed.users;
    if (cfg.frames == 0) spec.base.frames = fixed.frames;
    if (cfg.chips == 0) spec.base.chips = fixed.chips;
    if (cfg.paths == 0) spec.base.paths = fixed.paths;
    spec.seed = cfg.seed;
    spec.solver = sc.solver;
    spec.threads = sc.threads;
    if (sc.realizations) spec.realizations = *sc.realizations;
    if (realizations) {
      if (*realizations < 1) throw ConfigError("realizations", "realization count must be >= 1");
      spec.realizations = *realizations;
    }
    for (const std::string& g : grid) detail::apply_grid(spec, g);

    const mc::ExperimentResult res = mc::run_experiment(spec);
    const std::string dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    mc::write_result(res, dir);
    if (verbosity > 0) csv::write(out, res.columns, res.rows);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "uwbpc: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleTargetError& e) {
    err << "uwbpc: " << e.what() << "\n";
    return kExitSolver;
  } catch (const DegenerateChannelError& e) {
    err << "uwbpc: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "uwbpc: error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace uwbpc::cli
