#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "uwbpc/config.hpp"
#include "uwbpc/efficiency.hpp"

namespace uwbpc {

/// Closed-form large-system predictions at the Nash equilibrium.
struct LsaPrediction {
  double rho = 0.0;
  double interference_sum = 0.0;  // rho (K-1) / N_f
  int n_f_min = 1;
  double gamma_bar_star = 0.0;
  bool feasible = false;             // p_pred/u_pred are empty when false
  bool below_regulatory_floor = false;  // N_f < 5, reported only
  std::vector<double> p_pred;
  std::vector<double> u_pred;
};

inline constexpr int kRegulatoryMinFrames = 5;

/// rho = L^(1/N_c) / N_c.
inline double load_factor(int paths, int chips) {
  if (paths < 1 || chips < 1) throw std::invalid_argument("load_factor: need L >= 1, N_c >= 1");
  return std::pow(static_cast<double>(paths), 1.0 / chips) / chips;
}

inline double interference_approx(double rho, int users, int frames) {
  if (users < 1 || frames < 1) throw std::invalid_argument("interference_approx: need K >= 1, N_f >= 1");
  return rho * (users - 1) / frames;
}

/// gamma_bar* rho (K-1): the continuous frame requirement before rounding.
inline double frame_requirement(double rho, int users, int total_bits) {
  return gamma_bar_star(total_bits) * rho * (users - 1);
}

/// Smallest N_f at which every user can reach gamma_bar*, floored at 1.
inline int min_frames(double rho, int users, int total_bits) {
  const double need = frame_requirement(rho, users, total_bits);
  return std::max(1, static_cast<int>(std::ceil(need)));
}

inline LsaPrediction predict_equilibrium(std::span<const double> h_sp, const NetworkConfig& config) {
  if (h_sp.size() != static_cast<std::size_t>(config.users)) {
    throw std::invalid_argument("predict_equilibrium: h_SP size does not match K");
  }
  LsaPrediction out;
  out.rho = load_factor(config.paths, config.chips);
  out.interference_sum = interference_approx(out.rho, config.users, config.frames);
  out.n_f_min = min_frames(out.rho, config.users, config.total_bits);
  out.gamma_bar_star = gamma_bar_star(config.total_bits);
  out.below_regulatory_floor = config.frames < kRegulatoryMinFrames;

  const double margin = 1.0 - out.gamma_bar_star * out.interference_sum;
  out.feasible = margin > 0.0;
  if (!out.feasible) return out;

  const double sg = config.noise_power * out.gamma_bar_star;
  const double per_gain_utility =
      config.goodput_scale() * efficiency(out.gamma_bar_star, config.total_bits) * margin / sg;
  out.p_pred.resize(h_sp.size());
  out.u_pred.resize(h_sp.size());
  for (std::size_t k = 0; k < h_sp.size(); ++k) {
    out.p_pred[k] = sg / (h_sp[k] * margin);
    out.u_pred[k] = h_sp[k] * per_gain_utility;
  }
  return out;
}

}  // namespace uwbpc
