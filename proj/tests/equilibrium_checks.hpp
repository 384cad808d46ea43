#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "uwbpc/channel.hpp"
#include "uwbpc/efficiency.hpp"
#include "uwbpc/gains.hpp"
#include "uwbpc/nash.hpp"

namespace uwbpc::testing {

/// Utility of user k as a function of its own power, others fixed.
inline double own_utility(std::size_t k, std::vector<double> p, double pk, const GainSet& gains,
                          const NetworkConfig& cfg) {
  p[k] = pk;
  return utility(pk, achieved_sinr(gains, p, cfg.noise_power)[k], cfg);
}

/// Largest relative utility improvement over best_response found on a grid
/// of `points` log-spaced powers in (0, p_max] plus a fine grid around the
/// best response. Non-positive means the best response is grid-optimal.
inline double best_response_grid_gap(std::size_t k, const std::vector<double>& p, const GainSet& gains,
                                     const NetworkConfig& cfg, int points) {
  const double br = best_response(k, p, gains, cfg);
  const double u_br = own_utility(k, p, br, gains, cfg);
  double worst = -1.0;
  auto probe = [&](double x) {
    if (!(x > 0.0) || x > cfg.p_max) return;
    worst = std::max(worst, (own_utility(k, p, x, gains, cfg) - u_br) / u_br);
  };
  const double lo = cfg.p_max * 1e-12;
  for (int i = 0; i < points; ++i) probe(lo * std::pow(cfg.p_max / lo, static_cast<double>(i) / (points - 1)));
  for (int i = -points / 2; i <= points / 2; ++i) probe(br * (1.0 + 1e-2 * i / points));
  return worst;
}

struct EquilibriumCheck {
  bool converged = false;
  bool target_below_zeta = true;
  double fixed_point = 0.0;  // max_k |BR_k(p*) - p*_k| / p*_k
  double multistart = 0.0;   // max_k relative gap between two starts
  double grid_gap = 0.0;     // max over users of best_response_grid_gap
};

inline EquilibriumCheck check_equilibrium(const NetworkConfig& cfg, int grid_points) {
  Rng rng = make_stream(cfg.seed, 0);
  const GainSet gains = compute_gains(generate_channels(cfg, rng), cfg);
  const std::size_t K = gains.users();
  EquilibriumCheck out;

  const EquilibriumResult eq = solve_nash(gains, cfg);
  out.converged = eq.converged;
  for (std::size_t k = 0; k < K; ++k) {
    out.target_below_zeta = out.target_below_zeta && eq.gamma_star[k] >= 0.0 && eq.gamma_star[k] < gains.zeta[k];
    const double br = best_response(k, eq.p_star, gains, cfg);
    out.fixed_point = std::max(out.fixed_point, std::abs(br - eq.p_star[k]) / eq.p_star[k]);
  }

  SolverOptions tight;
  tight.tolerance = 1e-13;
  tight.max_iterations = 200000;
  tight.initial.assign(K, 1e-12 * cfg.p_max);
  const EquilibriumResult low = solve_nash(gains, cfg, tight);
  tight.initial.assign(K, cfg.p_max);
  const EquilibriumResult high = solve_nash(gains, cfg, tight);
  out.converged = out.converged && low.converged && high.converged;
  for (std::size_t k = 0; k < K; ++k) {
    out.multistart = std::max(out.multistart, std::abs(low.p_star[k] - high.p_star[k]) / high.p_star[k]);
    out.grid_gap = std::max(out.grid_gap, best_response_grid_gap(k, eq.p_star, gains, cfg, grid_points));
  }
  return out;
}

}  // namespace uwbpc::testing
