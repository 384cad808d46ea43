#pragma once

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "uwbpc/config.hpp"
#include "uwbpc/efficiency.hpp"
#include "uwbpc/gains.hpp"
#include "uwbpc/lsa.hpp"
#include "uwbpc/nash.hpp"

namespace uwbpc {

class InfeasibleSinrError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cooperative solution with a common SINR for all users.
struct SocialOptimum {
  bool feasible = false;
  double rho = 0.0;
  double gamma_opt = 0.0;
  double q_opt = 0.0;  // common received power h_SP,k p_k
  std::vector<double> p_opt;
  std::vector<double> u_opt;
};

/// Common received power needed for every user to reach SINR gamma under
/// the large-system interference model.
inline double q_of_gamma(double gamma, double rho, int users, int frames, double noise_power) {
  const double denom = frames - gamma * rho * (users - 1);
  if (!(denom > 0.0)) throw InfeasibleSinrError("q_of_gamma: SINR beyond the large-system bound");
  return frames * noise_power * gamma / denom;
}

/// Balanced SINR maximizing f(gamma)/q(gamma): Gamma(N_f / (rho (K-1))).
inline double solve_gamma_opt(double rho, int users, int frames, int total_bits) {
  if (users <= 1 || rho == 0.0) return gamma_bar_star(total_bits);
  return gamma_big_function(frames / (rho * (users - 1)), total_bits);
}

/// Same optimum found from the stationarity of log f(gamma) - log q(gamma)
/// by plain bisection, independent of the target-SINR solver.
inline double solve_gamma_opt_direct(double rho, int users, int frames, int total_bits) {
  const double c = rho * (users - 1);
  auto slope = [&](double g) {
    const double log_f = 0.5 * total_bits / std::expm1(g / 2.0);
    const double log_q = c > 0.0 ? frames / (g * (frames - g * c)) : 1.0 / g;
    return log_f - log_q;
  };
  double lo = 1e-9;
  double hi;
  if (c > 0.0) {
    hi = frames / c * (1.0 - 1e-15);
  } else {
    hi = 1.0;
    while (slope(hi) > 0.0) hi *= 2.0;
  }
  if (!(slope(lo) > 0.0)) throw InfeasibleTargetError("solve_gamma_opt_direct: no interior optimum");
  for (int i = 0; i < 400 && (hi - lo) > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline SocialOptimum social_optimum(const GainSet& gains, const NetworkConfig& config) {
  SocialOptimum s;
  s.rho = load_factor(config.paths, config.chips);
  s.gamma_opt = solve_gamma_opt(s.rho, config.users, config.frames, config.total_bits);
  try {
    s.q_opt = q_of_gamma(s.gamma_opt, s.rho, config.users, config.frames, config.noise_power);
  } catch (const InfeasibleSinrError&) {
    return s;
  }
  s.feasible = true;
  const std::size_t K = gains.users();
  s.p_opt.resize(K);
  s.u_opt.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    s.p_opt[k] = s.q_opt / gains.h_sp[k];
    s.u_opt[k] = utility(s.p_opt[k], s.gamma_opt, config);
  }
  return s;
}

/// Weighted sum of utilities with SINRs from the full interference model.
/// Empty weights means all ones.
inline double sum_utility(const GainSet& gains, std::span<const double> p, const NetworkConfig& config,
                          std::span<const double> weights = {}) {
  const std::vector<double> sinr = achieved_sinr(gains, p, config.noise_power);
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    total += w * utility(p[k], sinr[k], config);
  }
  return total;
}

/// Powers giving every user exactly SINR gamma under the full interference
/// model; nullopt if no positive solution exists.
inline std::optional<std::vector<double>> balanced_sinr_powers(const GainSet& gains, double gamma,
                                                               double noise_power) {
  const auto K = static_cast<Eigen::Index>(gains.users());
  Eigen::MatrixXd a = -gamma * gains.h_mai;
  for (Eigen::Index k = 0; k < K; ++k) {
    a(k, k) = gains.h_sp[static_cast<std::size_t>(k)] - gamma * gains.h_si[static_cast<std::size_t>(k)];
  }
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(K, gamma * noise_power);
  const Eigen::VectorXd p = a.partialPivLu().solve(rhs);
  std::vector<double> out(static_cast<std::size_t>(K));
  for (Eigen::Index k = 0; k < K; ++k) {
    if (!(p(k) > 0.0) || !std::isfinite(p(k))) return std::nullopt;
    out[static_cast<std::size_t>(k)] = p(k);
  }
  return out;
}

/// Numerical social optimum over balanced-SINR allocations using the actual
/// gains: maximizes f(gamma) sum_k 1/p_k(gamma) over gamma. Users above
/// p_max make the allocation infeasible.
inline SocialOptimum balanced_sinr_search(const GainSet& gains, const NetworkConfig& config) {
  SocialOptimum s;
  s.rho = load_factor(config.paths, config.chips);
  const double g_bar = gamma_bar_star(config.total_bits);

  auto admissible = [&](double g) {
    const auto p = balanced_sinr_powers(gains, g, config.noise_power);
    if (!p) return false;
    for (double x : *p) {
      if (x > config.p_max) return false;
    }
    return true;
  };

  double hi = g_bar;
  if (!admissible(hi)) {
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (admissible(mid) ? lo : hi) = mid;
    }
    hi = lo;
    if (!(hi > 0.0)) return s;
  }

  auto neg_objective = [&](double g) {
    const auto p = balanced_sinr_powers(gains, g, config.noise_power);
    if (!p) return std::numeric_limits<double>::infinity();
    double inv = 0.0;
    for (double x : *p) inv += 1.0 / x;
    return -(std::log(efficiency(g, config.total_bits)) + std::log(inv));
  };
  const auto [g, value] = boost::math::tools::brent_find_minima(neg_objective, 1e-3 * hi, hi, 50);
  (void)value;

  s.feasible = true;
  s.gamma_opt = g;
  s.p_opt = *balanced_sinr_powers(gains, g, config.noise_power);
  s.u_opt.resize(s.p_opt.size());
  double q = 0.0;
  for (std::size_t k = 0; k < s.p_opt.size(); ++k) {
    s.u_opt[k] = utility(s.p_opt[k], g, config);
    q += gains.h_sp[k] * s.p_opt[k];
  }
  s.q_opt = q / static_cast<double>(s.p_opt.size());
  return s;
}

struct GridSearchResult {
  std::vector<double> p;
  double sum_utility = 0.0;
  std::size_t evaluated = 0;
};

/// Exhaustive search of the equal-weight sum utility over a per-user power
/// grid. Axis k holds `points` log-spaced powers whose received power
/// h_SP,k p spans [q_lo, q_hi]; points above p_max are skipped. Exponential
/// in K, so restricted to K <= 3.
inline GridSearchResult exhaustive_search(const GainSet& gains, const NetworkConfig& config, int points,
                                          double q_lo, double q_hi) {
  const std::size_t K = gains.users();
  if (K < 1 || K > 3) throw std::invalid_argument("exhaustive_search: only 1 <= K <= 3 supported");
  if (points < 2 || !(q_lo > 0.0) || !(q_hi > q_lo)) throw std::invalid_argument("exhaustive_search: bad grid");

  std::vector<std::vector<double>> axes(K, std::vector<double>(static_cast<std::size_t>(points)));
  const double step = std::log(q_hi / q_lo) / (points - 1);
  for (std::size_t k = 0; k < K; ++k) {
    for (int i = 0; i < points; ++i) axes[k][static_cast<std::size_t>(i)] = q_lo * std::exp(step * i) / gains.h_sp[k];
  }

  GridSearchResult best;
  best.sum_utility = -1.0;
  std::vector<std::size_t> idx(K, 0);
  std::vector<double> p(K);
  while (true) {
    bool ok = true;
    for (std::size_t k = 0; k < K; ++k) {
      p[k] = axes[k][idx[k]];
      ok = ok && p[k] <= config.p_max;
    }
    if (ok) {
      const double u = sum_utility(gains, p, config);
      ++best.evaluated;
      if (u > best.sum_utility) {
        best.sum_utility = u;
        best.p = p;
      }
    }
    std::size_t d = 0;
    while (d < K && ++idx[d] == static_cast<std::size_t>(points)) idx[d++] = 0;
    if (d == K) break;
  }
  return best;
}

}  // namespace uwbpc
