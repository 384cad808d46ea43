#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "uwbpc/channel.hpp"
#include "uwbpc/config.hpp"
#include "uwbpc/csv.hpp"
#include "uwbpc/efficiency.hpp"
#include "uwbpc/gains.hpp"
#include "uwbpc/io.hpp"
#include "uwbpc/lsa.hpp"
#include "uwbpc/nash.hpp"
#include "uwbpc/pareto.hpp"
#include "uwbpc/units.hpp"

namespace uwbpc::mc {

using IntPair = std::pair<int, int>;

/// One experiment: which table/figure, its parameter grid, and run control.
/// Only the grid fields used by `id` are read.
struct ExperimentSpec {
  std::string id;               // table1 | table2 | fig3 | fig4 | fig5 | fig6
  NetworkConfig base;           // scalar parameters shared by all grid points
  SolverOptions solver;
  int realizations = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;         // 0: hardware concurrency

  std::vector<IntPair> chips_frames;  // (N_c, N_f): table1, fig4
  std::vector<IntPair> paths_users;   // (L, K): table1
  std::vector<IntPair> frames_users;  // (N_f, K): table2
  std::vector<double> rho;            // table2, fig6
  std::vector<int> frames;            // fig5
  std::vector<double> zeta_db;        // fig3
  int max_paths = 200;                // (N_c, L) search bound for a target rho
};

struct ExperimentResult {
  std::string id;
  std::vector<std::string> columns;
  std::vector<csv::Row> rows;
  // Optional per-curve aggregates for scatter-type experiments (fig4).
  std::vector<std::string> summary_columns;
  std::vector<csv::Row> summary_rows;
  io::json metadata;
};

inline const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"table1", "table2", "fig3", "fig4", "fig5", "fig6"};
  return ids;
}

/// Grids and fixed dimensions of the reference experiments.
inline ExperimentSpec default_spec(const std::string& id) {
  ExperimentSpec s;
  s.id = id;
  if (id == "table1") {
    s.chips_frames = {{30, 10}, {30, 50}, {50, 10}, {50, 50}, {100, 10}, {100, 50}};
    s.paths_users = {{20, 8}, {20, 16}, {50, 8}, {50, 16}};
  } else if (id == "table2") {
    s.rho = {0.01, 0.02, 0.03, 0.04, 0.05};
    s.frames_users = {{20, 8}, {20, 12}, {50, 8}, {50, 12}};
  } else if (id == "fig3") {
    for (int i = 0; i <= 100; ++i) s.zeta_db.push_back(0.5 * i);
  } else if (id == "fig4") {
    s.base.users = 5;
    s.base.paths = 50;
    s.chips_frames = {{100, 10}, {10, 100}};
  } else if (id == "fig5") {
    s.base.users = 32;
    s.base.chips = 50;
    s.base.paths = 100;
    for (int n = 4; n <= 20; ++n) s.frames.push_back(n);
  } else if (id == "fig6") {
    s.base.users = 5;
    s.base.frames = 50;
    for (int i = 0; i <= 8; ++i) s.rho.push_back(0.01 + 0.005 * i);
  } else {
    throw ConfigError("experiment", "unknown experiment '" + id + "'");
  }
  return s;
}

/// Runs fn(i) for i in [0, n) on a worker pool and returns the results in
/// index order. The first exception thrown by any task is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, unsigned threads, Fn&& fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out(n);
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Chip count and path count whose load factor L^(1/N_c)/N_c is closest to
/// `rho`, preferring the largest N_c >= 10 whose best L stays within
/// [2, max_paths] (so L is as large as the bound permits).
struct LoadFactorDimensions {
  int chips = 0;
  int paths = 0;
  double rho = 0.0;  // achieved
};

inline LoadFactorDimensions dimensions_for_load_factor(double rho, int max_paths) {
  if (!(rho > 0.0) || max_paths < 2) throw ConfigError("rho", "need rho > 0 and max_paths >= 2");
  LoadFactorDimensions best;
  for (int nc = 10; nc < 100000; ++nc) {
    const double base = rho * nc;
    if (base <= 1.0) continue;
    const double ideal = std::pow(base, nc);
    if (std::floor(ideal) > max_paths) break;
    LoadFactorDimensions cand;
    double cand_err = std::numeric_limits<double>::infinity();
    for (double l : {std::floor(ideal), std::ceil(ideal)}) {
      const int L = std::max(2, static_cast<int>(l));
      if (L > max_paths) continue;
      const double achieved = load_factor(L, nc);
      const double err = std::abs(achieved - rho);
      if (err < cand_err) {
        cand_err = err;
        cand = {nc, L, achieved};
      }
    }
    if (cand.chips) best = cand;
  }
  if (!best.chips) {
    throw ConfigError("rho", "no (N_c >= 10, 2 <= L <= " + std::to_string(max_paths) + ") reaches rho = " +
                                 csv::format_double(rho));
  }
  return best;
}

namespace detail {

inline double mean(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::quiet_NaN()
                   : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double stderr_of_mean(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2) return *mid;
  return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

inline csv::Value i64(long long x) { return static_cast<std::int64_t>(x); }

inline ChannelRealization draw(const NetworkConfig& cfg, std::uint64_t seed, std::size_t index) {
  Rng rng = make_stream(seed, index);
  return generate_channels(cfg, rng);
}

inline io::json base_metadata(const ExperimentSpec& spec) {
  return {{"experiment", spec.id},
          {"seed", spec.seed},
          {"realizations", spec.realizations},
          {"version", io::kVersion},
          {"config", io::to_json(spec.base)},
          {"solver",
           {{"schedule", to_string(spec.solver.schedule)},
            {"tolerance", spec.solver.tolerance},
            {"max_iterations", spec.solver.max_iterations}}},
          {"channel_model", "real Gaussian taps, exponential power delay profile, d_ref = 1 m"}};
}

inline void check_realizations(const ExperimentSpec& spec) {
  if (spec.realizations < 1) throw ConfigError("realizations", "realization count must be >= 1");
}

}  // namespace detail

/// Dispersion of the received power q_k = h_SP,k p_k* at the Nash equilibrium.
/// `ratio` averages var_k(q)/mean_k(q)^2 over realizations; `ratio_pooled`
/// pools all (realization, user) samples.
inline ExperimentResult run_table1(const ExperimentSpec& spec) {
  detail::check_realizations(spec);
  if (spec.chips_frames.empty() || spec.paths_users.empty()) throw ConfigError("grid", "table1 grid is empty");
  ExperimentResult res;
  res.id = spec.id;
  res.columns = {"N_c", "N_f", "L", "K", "realizations", "excluded", "clamped", "ratio", "ratio_stderr",
                 "ratio_pooled"};
  struct Sample {
    bool converged = false;
    bool clamped = false;
    double ratio = 0.0;
    std::vector<double> q;
  };
  for (const auto& [nc, nf] : spec.chips_frames) {
    for (const auto& [L, K] : spec.paths_users) {
      NetworkConfig cfg = spec.base;
      cfg.chips = nc;
      cfg.frames = nf;
      cfg.paths = L;
      cfg.users = K;
      cfg.validate();
      const auto samples = parallel_map(static_cast<std::size_t>(spec.realizations), spec.threads, [&](std::size_t i) {
        const GainSet g = compute_gains(detail::draw(cfg, spec.seed, i), cfg);
        const EquilibriumResult eq = solve_nash(g, cfg, spec.solver);
        Sample s;
        s.converged = eq.converged;
        s.clamped = eq.any_at_pmax();
        if (!s.converged) return s;
        s.q.resize(g.users());
        for (std::size_t k = 0; k < g.users(); ++k) s.q[k] = g.h_sp[k] * eq.p_star[k];
        const double m = detail::mean(s.q);
        double var = 0.0;
        for (double x : s.q) var += (x - m) * (x - m);
        var /= static_cast<double>(s.q.size());
        s.ratio = var / (m * m);
        return s;
      });
      std::vector<double> ratios, pooled;
      long long excluded = 0, clamped = 0;
      for (const Sample& s : samples) {
        if (!s.converged) {
          ++excluded;
          continue;
        }
        clamped += s.clamped;
        ratios.push_back(s.ratio);
        pooled.insert(pooled.end(), s.q.begin(), s.q.end());
      }
      const double pm = detail::mean(pooled);
      double pv = 0.0;
      for (double x : pooled) pv += (x - pm) * (x - pm);
      pv /= static_cast<double>(std::max<std::size_t>(pooled.size(), 1));
      res.rows.push_back({detail::i64(nc), detail::i64(nf), detail::i64(L), detail::i64(K),
                          detail::i64(spec.realizations), detail::i64(excluded), detail::i64(clamped),
                          detail::mean(ratios), detail::stderr_of_mean(ratios), pv / (pm * pm)});
    }
  }
  res.metadata = detail::base_metadata(spec);
  return res;
}

/// Normalized mse of the true interference sum zeta_k^-1 + mu_k^-1 against
/// rho (K-1)/N_f. With K = 1 the approximation is zero, so the mse is
/// normalized by the squared mean of the true value instead.
inline ExperimentResult run_table2(const ExperimentSpec& spec) {
  detail::check_realizations(spec);
  if (spec.rho.empty() || spec.frames_users.empty()) throw ConfigError("grid", "table2 grid is empty");
  ExperimentResult res;
  res.id = spec.id;
  res.columns = {"rho", "N_c", "L", "rho_achieved", "N_f", "K", "realizations", "excluded", "approximation",
                 "mean_interference", "mse", "nmse"};

  std::vector<int> users;
  for (const auto& fk : spec.frames_users) {
    if (std::find(users.begin(), users.end(), fk.second) == users.end()) users.push_back(fk.second);
  }
  io::json mapping = io::json::array();
  for (double rho : spec.rho) {
    const LoadFactorDimensions dims = dimensions_for_load_factor(rho, spec.max_paths);
    mapping.push_back({{"rho", rho}, {"N_c", dims.chips}, {"L", dims.paths}, {"rho_achieved", dims.rho}});
    for (int K : users) {
      std::vector<int> frames;
      for (const auto& [nf, k] : spec.frames_users) {
        if (k == K) frames.push_back(nf);
      }
      NetworkConfig cfg = spec.base;
      cfg.chips = dims.chips;
      cfg.paths = dims.paths;
      cfg.users = K;
      cfg.frames = frames.front();
      cfg.validate();
      // per realization: sums of x and (x - a)^2 over users, for each N_f
      using Sums = std::vector<std::pair<double, double>>;
      const auto sums = parallel_map(static_cast<std::size_t>(spec.realizations), spec.threads, [&](std::size_t i) {
        const GainSet base = compute_gains(detail::draw(cfg, spec.seed, i), cfg);
        Sums out;
        for (int nf : frames) {
          const GainSet g = with_frames(base, nf);
          const double a = interference_approx(dims.rho, K, nf);
          double sx = 0.0, se = 0.0;
          for (std::size_t k = 0; k < g.users(); ++k) {
            const double x = g.interference_sum(k);
            sx += x;
            se += (x - a) * (x - a);
          }
          out.emplace_back(sx, se);
        }
        return out;
      });
      for (std::size_t f = 0; f < frames.size(); ++f) {
        double sx = 0.0, se = 0.0;
        for (const Sums& s : sums) {
          sx += s[f].first;
          se += s[f].second;
        }
        const double n = static_cast<double>(spec.realizations) * K;
        const double a = interference_approx(dims.rho, K, frames[f]);
        const double mse = se / n;
        const double mean_x = sx / n;
        const double norm = a > 0.0 ? a * a : mean_x * mean_x;
        res.rows.push_back({rho, detail::i64(dims.chips), detail::i64(dims.paths), dims.rho, detail::i64(frames[f]),
                            detail::i64(K), detail::i64(spec.realizations), detail::i64(0), a, mean_x, mse,
                            mse / norm});
      }
    }
  }
  // rows in grid order: rho, then (N_f, K) as listed
  std::vector<csv::Row> ordered;
  for (double rho : spec.rho) {
    for (const auto& [nf, K] : spec.frames_users) {
      for (const csv::Row& r : res.rows) {
        if (std::get<double>(r[0]) == rho && std::get<std::int64_t>(r[4]) == nf && std::get<std::int64_t>(r[5]) == K) {
          ordered.push_back(r);
          break;
        }
      }
    }
  }
  res.rows = std::move(ordered);
  res.metadata = detail::base_metadata(spec);
  res.metadata["dimensions"] = mapping;
  return res;
}

/// Target SINR as a function of zeta (pure theory curve).
inline ExperimentResult run_fig3(const ExperimentSpec& spec) {
  if (spec.zeta_db.empty()) throw ConfigError("grid", "fig3 grid is empty");
  ExperimentResult res;
  res.id = spec.id;
  res.columns = {"zeta_db", "zeta", "gamma_star", "gamma_star_db", "gamma_bar_star_db"};
  const double g_bar = gamma_bar_star(spec.base.total_bits);
  for (double zdb : spec.zeta_db) {
    const double z = from_db(zdb);
    const double g = gamma_big_function(z, spec.base.total_bits);
    res.rows.push_back({zdb, z, g, to_db(g), to_db(g_bar)});
  }
  res.metadata = detail::base_metadata(spec);
  return res;
}

/// Equilibrium utility against channel gain, simulated and predicted, for
/// each (N_c, N_f) split of the processing gain. Rows are scatter points;
/// the summary has one row per curve.
inline ExperimentResult run_fig4(const ExperimentSpec& spec) {
  detail::check_realizations(spec);
  if (spec.chips_frames.empty()) throw ConfigError("grid", "fig4 grid is empty");
  ExperimentResult res;
  res.id = spec.id;
  res.columns = {"N_c", "N_f", "ratio", "realization", "user", "h", "u_sim", "u_theory", "rel_error", "gamma_db"};
  res.summary_columns = {"N_c",    "N_f", "ratio", "realizations", "excluded", "points", "median_rel_error",
                         "mean_normalized_utility_sim", "normalized_utility_theory"};
  struct Point {
    bool converged = false;
    std::vector<double> h, u, u_pred, gamma;
  };
  for (const auto& [nc, nf] : spec.chips_frames) {
    NetworkConfig cfg = spec.base;
    cfg.chips = nc;
    cfg.frames = nf;
    cfg.validate();
    const auto pts = parallel_map(static_cast<std::size_t>(spec.realizations), spec.threads, [&](std::size_t i) {
      const GainSet g = compute_gains(detail::draw(cfg, spec.seed, i), cfg);
      const EquilibriumResult eq = solve_nash(g, cfg, spec.solver);
      const LsaPrediction pred = predict_equilibrium(g.h_sp, cfg);
      Point p;
      p.converged = eq.converged && pred.feasible;
      p.h = g.h_sp;
      p.u = eq.utility;
      p.u_pred = pred.u_pred;
      p.gamma = eq.gamma;
      return p;
    });
    const double ratio = static_cast<double>(nc) / nf;
    std::vector<double> errors, normalized;
    long long excluded = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!pts[i].converged) {
        ++excluded;
        continue;
      }
      for (std::size_t k = 0; k < pts[i].h.size(); ++k) {
        const double err = std::abs(pts[i].u[k] - pts[i].u_pred[k]) / pts[i].u_pred[k];
        errors.push_back(err);
        normalized.push_back(pts[i].u[k] / pts[i].h[k]);
        res.rows.push_back({detail::i64(nc), detail::i64(nf), ratio, detail::i64(static_cast<long long>(i)),
                            detail::i64(static_cast<long long>(k)), pts[i].h[k], pts[i].u[k], pts[i].u_pred[k], err,
                            to_db(pts[i].gamma[k])});
      }
    }
    const LsaPrediction unit_pred =
        predict_equilibrium(std::vector<double>(static_cast<std::size_t>(cfg.users), 1.0), cfg);
    res.summary_rows.push_back({detail::i64(nc), detail::i64(nf), ratio, detail::i64(spec.realizations),
                                detail::i64(excluded), detail::i64(static_cast<long long>(errors.size())),
                                detail::median(errors), detail::mean(normalized),
                                unit_pred.feasible ? unit_pred.u_pred.front() : std::nan("")});
  }
  res.metadata = detail::base_metadata(spec);
  return res;
}

/// Probability that at least one user transmits at p_max versus N_f.
inline ExperimentResult run_fig5(const ExperimentSpec& spec) {
  detail::check_realizations(spec);
  if (spec.frames.empty()) throw ConfigError("grid", "fig5 grid is empty");
  ExperimentResult res;
  res.id = spec.id;
  res.columns = {"N_f", "realizations", "excluded", "p_out", "p_out_stderr", "N_f_min", "mean_iterations"};

  NetworkConfig cfg = spec.base;
  cfg.frames = spec.frames.front();
  cfg.validate();
  struct Outcome {
    std::vector<signed char> clamped;  // -1: not converged
    std::vector<int> iterations;
  };
  const auto outcomes = parallel_map(static_cast<std::size_t>(spec.realizations), spec.threads, [&](std::size_t i) {
    const GainSet base = compute_gains(detail::draw(cfg, spec.seed, i), cfg);
    Outcome o;
    for (int nf : spec.frames) {
      NetworkConfig c = cfg;
      c.frames = nf;
      const EquilibriumResult eq = solve_nash(with_frames(base, nf), c, spec.solver);
      o.clamped.push_back(eq.converged ? static_cast<signed char>(eq.any_at_pmax()) : -1);
      o.iterations.push_back(eq.iterations);
    }
    return o;
  });
  const int nf_min = min_frames(load_factor(cfg.paths, cfg.chips), cfg.users, cfg.total_bits);
  for (std::size_t f = 0; f < spec.frames.size(); ++f) {
    long long excluded = 0, hits = 0, iters = 0;
    for (const Outcome& o : outcomes) {
      iters += o.iterations[f];
      if (o.clamped[f] < 0) {
        ++excluded;
        continue;
      }
      hits += o.clamped[f];
    }
    const double n = static_cast<double>(spec.realizations - excluded);
    const double p = n > 0 ? hits / n : std::nan("");
    res.rows.push_back({detail::i64(spec.frames[f]), detail::i64(spec.realizations), detail::i64(excluded), p,
                        n > 1 ? std::sqrt(p * (1.0 - p) / n) : 0.0, detail::i64(nf_min),
                        static_cast<double>(iters) / spec.realizations});
  }
  res.metadata = detail::base_metadata(spec);
  return res;
}

/// Normalized utility u_k/h_k of the Nash equilibrium and of the balanced
/// social optimum against load factor, simulated and predicted.
inline ExperimentResult run_fig6(const ExperimentSpec& spec) {
  detail::check_realizations(spec);
  if (spec.rho.empty()) throw ConfigError("grid", "fig6 grid is empty");
  ExperimentResult res;
  res.id = spec.id;
  res.columns = {"rho",          "N_c",          "L",
                 "rho_achieved", "realizations", "excluded",
                 "nash_sim",     "nash_theory",  "pareto_sim",
                 "pareto_theory", "gamma_nash_db", "gamma_bar_star_db",
                 "gamma_opt_sim_db", "gamma_opt_theory_db"};
  const int M = spec.base.total_bits;
  const double g_bar = gamma_bar_star(M);
  for (double rho : spec.rho) {
    const LoadFactorDimensions dims = dimensions_for_load_factor(rho, spec.max_paths);
    NetworkConfig cfg = spec.base;
    cfg.chips = dims.chips;
    cfg.paths = dims.paths;
    cfg.validate();
    struct Sample {
      bool ok = false;
      double nash = 0, pareto = 0, gamma_nash = 0, gamma_opt = 0;
    };
    const auto samples = parallel_map(static_cast<std::size_t>(spec.realizations), spec.threads, [&](std::size_t i) {
      const GainSet g = compute_gains(detail::draw(cfg, spec.seed, i), cfg);
      const EquilibriumResult eq = solve_nash(g, cfg, spec.solver);
      const SocialOptimum so = balanced_sinr_search(g, cfg);
      Sample s;
      s.ok = eq.converged && so.feasible;
      if (!s.ok) return s;
      for (std::size_t k = 0; k < g.users(); ++k) {
        s.nash += eq.utility[k] / g.h_sp[k];
        s.pareto += so.u_opt[k] / g.h_sp[k];
        s.gamma_nash += eq.gamma[k];
      }
      const double K = static_cast<double>(g.users());
      s.nash /= K;
      s.pareto /= K;
      s.gamma_nash /= K;
      s.gamma_opt = so.gamma_opt;
      return s;
    });
    std::vector<double> nash, pareto, gn, go;
    long long excluded = 0;
    for (const Sample& s : samples) {
      if (!s.ok) {
        ++excluded;
        continue;
      }
      nash.push_back(s.nash);
      pareto.push_back(s.pareto);
      gn.push_back(s.gamma_nash);
      go.push_back(s.gamma_opt);
    }
    const double I = interference_approx(dims.rho, cfg.users, cfg.frames);
    const double gopt = solve_gamma_opt(dims.rho, cfg.users, cfg.frames, M);
    auto theory = [&](double g) {
      return cfg.goodput_scale() * efficiency(g, M) * (1.0 - g * I) / (cfg.noise_power * g);
    };
    res.rows.push_back({rho, detail::i64(dims.chips), detail::i64(dims.paths), dims.rho,
                        detail::i64(spec.realizations), detail::i64(excluded), detail::mean(nash), theory(g_bar),
                        detail::mean(pareto), theory(gopt), to_db(detail::mean(gn)), to_db(g_bar),
                        to_db(detail::mean(go)), to_db(gopt)});
  }
  res.metadata = detail::base_metadata(spec);
  return res;
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult res;
  if (spec.id == "table1") res = run_table1(spec);
  else if (spec.id == "table2") res = run_table2(spec);
  else if (spec.id == "fig3") res = run_fig3(spec);
  else if (spec.id == "fig4") res = run_fig4(spec);
  else if (spec.id == "fig5") res = run_fig5(spec);
  else if (spec.id == "fig6") res = run_fig6(spec);
  else throw ConfigError("experiment", "unknown experiment '" + spec.id + "'");
  res.metadata["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

/// Writes <dir>/<id>.csv, <dir>/<id>_summary.csv when present, and the
/// <dir>/<id>.json sidecar.
inline void write_result(const ExperimentResult& res, const std::string& dir) {
  auto open = [](const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("out", "cannot write " + path);
    return os;
  };
  {
    auto os = open(dir + "/" + res.id + ".csv");
    csv::write(os, res.columns, res.rows);
  }
  if (!res.summary_columns.empty()) {
    auto os = open(dir + "/" + res.id + "_summary.csv");
    csv::write(os, res.summary_columns, res.summary_rows);
  }
  auto os = open(dir + "/" + res.id + ".json");
  os << res.metadata.dump(2) << "\n";
}

}  // namespace uwbpc::mc
