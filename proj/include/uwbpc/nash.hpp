#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "uwbpc/config.hpp"
#include "uwbpc/efficiency.hpp"
#include "uwbpc/gains.hpp"

namespace uwbpc {

struct SolverOptions {
  Schedule schedule = Schedule::sequential;
  double tolerance = 1e-8;      // max relative power change between sweeps
  int max_iterations = 10000;
  std::vector<double> initial;  // empty: sigma^2 gamma_bar* / h_SP,k
};

struct EquilibriumResult {
  std::vector<double> p_star;
  std::vector<double> gamma;       // achieved SINR
  std::vector<double> gamma_star;  // per-user target
  std::vector<double> utility;
  std::vector<bool> at_pmax;
  int iterations = 0;
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();
  Schedule schedule = Schedule::sequential;

  bool any_at_pmax() const { return std::find(at_pmax.begin(), at_pmax.end(), true) != at_pmax.end(); }
};

inline std::vector<double> target_sinrs(const GainSet& gains, int total_bits) {
  std::vector<double> t(gains.users());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = solve_gamma_star(gains.zeta[k], total_bits);
  return t;
}

/// Rake-output SINR of every user for power vector p.
inline std::vector<double> achieved_sinr(const GainSet& gains, std::span<const double> p, double noise_power) {
  const std::size_t K = gains.users();
  std::vector<double> out(K);
  for (std::size_t k = 0; k < K; ++k) {
    double mai = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      if (j != k) mai += gains.h_mai(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * p[j];
    }
    out[k] = gains.h_sp[k] * p[k] / (gains.h_si[k] * p[k] + mai + noise_power);
  }
  return out;
}

/// Power at which user k reaches `target` against the other users' powers
/// in p, clamped to [p_min, p_max].
inline double best_response(std::size_t k, std::span<const double> p, const GainSet& gains,
                            const NetworkConfig& config, double target) {
  double interference = config.noise_power;
  for (std::size_t j = 0; j < gains.users(); ++j) {
    if (j != k) interference += gains.h_mai(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * p[j];
  }
  const double shrink = std::isinf(gains.zeta[k]) ? 1.0 : 1.0 - target / gains.zeta[k];
  const double unconstrained = target * interference / (gains.h_sp[k] * shrink);
  return std::clamp(unconstrained, config.p_min, config.p_max);
}

inline double best_response(std::size_t k, std::span<const double> p, const GainSet& gains,
                            const NetworkConfig& config) {
  return best_response(k, p, gains, config, solve_gamma_star(gains.zeta[k], config.total_bits));
}

/// Best-response dynamics to the Nash equilibrium of the power control game.
/// Non-convergence within the iteration cap is reported via `converged`.
inline EquilibriumResult solve_nash(const GainSet& gains, const NetworkConfig& config,
                                    const SolverOptions& options = {}) {
  const std::size_t K = gains.users();
  EquilibriumResult res;
  res.schedule = options.schedule;
  res.gamma_star = target_sinrs(gains, config.total_bits);

  std::vector<double> p(K);
  if (!options.initial.empty()) {
    if (options.initial.size() != K) throw std::invalid_argument("solve_nash: initial power vector has wrong size");
    for (std::size_t k = 0; k < K; ++k) p[k] = std::clamp(options.initial[k], config.p_min, config.p_max);
  } else {
    const double g_bar = gamma_bar_star(config.total_bits);
    for (std::size_t k = 0; k < K; ++k) {
      p[k] = std::clamp(config.noise_power * g_bar / gains.h_sp[k], config.p_min, config.p_max);
    }
  }

  auto rel_change = [](double next, double prev) {
    if (next == prev) return 0.0;
    if (prev == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(next - prev) / prev;
  };

  std::vector<double> next(K);
  for (int it = 1; it <= options.max_iterations; ++it) {
    double change = 0.0;
    if (options.schedule == Schedule::sequential) {
      for (std::size_t k = 0; k < K; ++k) {
        const double v = best_response(k, p, gains, config, res.gamma_star[k]);
        change = std::max(change, rel_change(v, p[k]));
        p[k] = v;
      }
    } else {
      for (std::size_t k = 0; k < K; ++k) next[k] = best_response(k, p, gains, config, res.gamma_star[k]);
      for (std::size_t k = 0; k < K; ++k) change = std::max(change, rel_change(next[k], p[k]));
      p.swap(next);
    }
    res.iterations = it;
    res.residual = change;
    if (change < options.tolerance) {
      res.converged = true;
      break;
    }
  }

  res.p_star = p;
  res.gamma = achieved_sinr(gains, p, config.noise_power);
  res.utility.resize(K);
  res.at_pmax.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    res.utility[k] = utility(p[k], res.gamma[k], config);
    res.at_pmax[k] = p[k] >= config.p_max;
  }
  return res;
}

struct MinPowerSolution {
  bool feasible = false;
  std::vector<double> p;           // empty when infeasible
  std::vector<double> gamma_star;
  std::vector<double> margin;      // 1 - gamma*_k (zeta_k^-1 + mu_k^-1)
};

/// Joint feasibility of all targets and, when feasible, the minimum-power
/// allocation reaching them under a common received power.
inline MinPowerSolution feasibility_and_min_power(const GainSet& gains, const NetworkConfig& config) {
  const std::size_t K = gains.users();
  MinPowerSolution sol;
  sol.gamma_star = target_sinrs(gains, config.total_bits);
  sol.margin.resize(K);
  sol.feasible = true;
  for (std::size_t k = 0; k < K; ++k) {
    sol.margin[k] = 1.0 - sol.gamma_star[k] * gains.interference_sum(k);
    if (!(sol.margin[k] > 0.0)) sol.feasible = false;
  }
  if (sol.feasible) {
    sol.p.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      sol.p[k] = config.noise_power * sol.gamma_star[k] / (gains.h_sp[k] * sol.margin[k]);
    }
  }
  return sol;
}

}  // namespace uwbpc
