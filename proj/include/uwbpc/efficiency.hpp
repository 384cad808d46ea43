#pragma once

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "uwbpc/config.hpp"

namespace uwbpc {

class InfeasibleTargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Efficiency function f(gamma) = (1 - e^{-gamma/2})^M, an approximation of
/// the packet success rate of an M-bit packet.
inline double efficiency(double gamma, int total_bits) {
  if (!(gamma >= 0.0)) throw std::domain_error("efficiency: SINR must be >= 0");
  return std::pow(-std::expm1(-gamma / 2.0), total_bits);
}

inline double efficiency_prime(double gamma, int total_bits) {
  if (!(gamma >= 0.0)) throw std::domain_error("efficiency_prime: SINR must be >= 0");
  const double e = std::exp(-gamma / 2.0);
  return 0.5 * total_bits * e * std::pow(-std::expm1(-gamma / 2.0), total_bits - 1);
}

/// Bits delivered without error per Joule: (D/M) R f(gamma) / p. Zero at
/// p = 0 by continuity.
inline double utility(double power, double gamma, const NetworkConfig& config) {
  if (!(power >= 0.0)) throw std::domain_error("utility: power must be >= 0");
  if (power == 0.0) return 0.0;
  return config.goodput_scale() * efficiency(gamma, config.total_bits) / power;
}

namespace detail {

// gamma (1 - gamma/zeta) f'(gamma)/f(gamma) - 1. Dividing by f keeps the
// expression representable near gamma = 0, where f underflows.
inline double target_residual(double gamma, double zeta, int total_bits) {
  const double log_slope = 0.5 * total_bits / std::expm1(gamma / 2.0);
  const double shrink = std::isinf(zeta) ? 1.0 : 1.0 - gamma / zeta;
  return gamma * shrink * log_slope - 1.0;
}

}  // namespace detail

/// Utility-maximizing target SINR for a user whose signal-to-self-interference
/// ratio is `zeta`: the unique root in (0, zeta) of
///   gamma (1 - gamma/zeta) = f(gamma) / f'(gamma).
/// `zeta` may be +infinity (no self-interference).
inline double solve_gamma_star(double zeta, int total_bits) {
  if (!(zeta > 0.0)) throw std::domain_error("solve_gamma_star: zeta must be > 0");
  if (total_bits < 1) throw std::domain_error("solve_gamma_star: M must be >= 1");

  auto r = [&](double g) { return detail::target_residual(g, zeta, total_bits); };

  double lo = std::isinf(zeta) ? 1e-9 : std::min(1e-9, 1e-9 * zeta);
  if (!(r(lo) > 0.0)) {
    throw InfeasibleTargetError("no target SINR in (0, zeta) for M = " + std::to_string(total_bits) +
                                ", zeta = " + std::to_string(zeta));
  }
  double hi;
  if (std::isinf(zeta)) {
    hi = 1.0;
    while (r(hi) >= 0.0) {
      hi *= 2.0;
      if (hi > 1e300) throw InfeasibleTargetError("solve_gamma_star: no bracket found");
    }
  } else {
    hi = zeta * (1.0 - 1e-12);
    if (!(r(hi) < 0.0)) throw InfeasibleTargetError("solve_gamma_star: no sign change below zeta");
  }

  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(r, lo, hi, boost::math::tools::eps_tolerance<double>(),
                                                        max_iter);
  return 0.5 * (a + b);
}

/// The map zeta -> gamma* (increasing, bounded above by zeta).
inline double gamma_big_function(double x, int total_bits) { return solve_gamma_star(x, total_bits); }

/// Target SINR without self-interference, Gamma(+inf).
inline double gamma_bar_star(int total_bits) {
  return solve_gamma_star(std::numeric_limits<double>::infinity(), total_bits);
}

}  // namespace uwbpc
