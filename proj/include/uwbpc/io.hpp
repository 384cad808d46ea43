#pragma once

#include <json.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "uwbpc/channel.hpp"
#include "uwbpc/config.hpp"
#include "uwbpc/gains.hpp"
#include "uwbpc/lsa.hpp"
#include "uwbpc/nash.hpp"
#include "uwbpc/pareto.hpp"
#include "uwbpc/units.hpp"

// JSON views of the library types. Non-finite numbers are written as the
// strings "inf", "-inf" and "nan".
namespace uwbpc::io {

using nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

inline json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline json decibels(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(to_db(x)));
  return a;
}

inline json to_json(const NetworkConfig& c) {
  return {{"K", c.users},
          {"N_f", c.frames},
          {"N_c", c.chips},
          {"L", c.paths},
          {"G", c.processing_gain()},
          {"sigma2", c.noise_power},
          {"p_max", c.p_max},
          {"p_min", c.p_min},
          {"rate", c.rate},
          {"D", c.info_bits},
          {"M", c.total_bits},
          {"dist_min", c.dist_min},
          {"dist_max", c.dist_max},
          {"pdp_decay", number(c.decay())},
          {"pdp_decay_default", !c.pdp_decay.has_value()},
          {"path_loss_exp", c.path_loss_exp},
          {"d_ref", 1.0},
          {"seed", c.seed}};
}

inline json to_json(const ChannelRealization& ch) {
  return {{"alpha", ch.alpha}, {"delta", ch.delta}, {"distance", ch.distance}, {"h", numbers(ch.h)}};
}

inline json to_json(const GainSet& g) {
  json mai = json::array();
  for (Eigen::Index k = 0; k < g.h_mai.rows(); ++k) {
    json row = json::array();
    for (Eigen::Index j = 0; j < g.h_mai.cols(); ++j) row.push_back(g.h_mai(k, j));
    mai.push_back(row);
  }
  return {{"h_SP", numbers(g.h_sp)}, {"h_SI", numbers(g.h_si)}, {"h_MAI", mai},
          {"zeta", numbers(g.zeta)},  {"mu_inv", numbers(g.mu_inv)}, {"G", g.processing_gain}};
}

inline json to_json(const EquilibriumResult& r) {
  return {{"p_star", numbers(r.p_star)},
          {"gamma_db", decibels(r.gamma)},
          {"gamma_star_db", decibels(r.gamma_star)},
          {"utility", numbers(r.utility)},
          {"at_pmax", r.at_pmax},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"residual", number(r.residual)},
          {"schedule", to_string(r.schedule)}};
}

inline json to_json(const LsaPrediction& p) {
  json j = {{"rho", p.rho},
            {"interference_sum", p.interference_sum},
            {"N_f_min", p.n_f_min},
            {"gamma_bar_star_db", to_db(p.gamma_bar_star)},
            {"feasible", p.feasible},
            {"below_regulatory_floor", p.below_regulatory_floor}};
  if (p.feasible) {
    j["p_pred"] = numbers(p.p_pred);
    j["u_pred"] = numbers(p.u_pred);
  }
  return j;
}

inline json to_json(const SocialOptimum& s) {
  json j = {{"feasible", s.feasible}, {"rho", s.rho}, {"gamma_opt_db", number(to_db(s.gamma_opt))}};
  if (s.feasible) {
    j["q_opt"] = s.q_opt;
    j["p_opt"] = numbers(s.p_opt);
    j["u_opt"] = numbers(s.u_opt);
  }
  return j;
}

}  // namespace uwbpc::io
