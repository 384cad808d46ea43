#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "uwbpc/channel.hpp"
#include "uwbpc/gains.hpp"
#include "uwbpc/lsa.hpp"
#include "uwbpc/nash.hpp"

namespace uwbpc {
namespace {

using testing::make_config;
using testing::rel_diff;

TEST(LoadFactorTest, Values) {
  EXPECT_NEAR(load_factor(100, 50), 0.0219, 0.0002);
  EXPECT_LE(rel_diff(load_factor(100, 50), std::pow(100.0, 0.02) / 50.0), 1e-15);
  EXPECT_DOUBLE_EQ(load_factor(1, 8), 0.125);
  EXPECT_DOUBLE_EQ(load_factor(16, 2), 2.0);
  EXPECT_THROW(load_factor(0, 5), std::invalid_argument);
  EXPECT_THROW(load_factor(5, 0), std::invalid_argument);
}

TEST(MinFramesTest, ReferenceNetwork) {
  const double rho = load_factor(100, 50);
  EXPECT_NEAR(frame_requirement(rho, 32, 100), 8.803, 5e-3);
  EXPECT_EQ(min_frames(rho, 32, 100), 9);
}

TEST(MinFramesTest, SingleUserNeedsOneFrame) {
  EXPECT_EQ(frame_requirement(0.3, 1, 100), 0.0);
  EXPECT_EQ(min_frames(0.3, 1, 100), 1);
  EXPECT_GE(min_frames(1e-9, 2, 100), 1);
}

TEST(InterferenceApproxTest, Linear) {
  const double rho = 0.02;
  EXPECT_EQ(interference_approx(rho, 1, 10), 0.0);
  EXPECT_DOUBLE_EQ(interference_approx(rho, 9, 10), 0.016);
  EXPECT_DOUBLE_EQ(interference_approx(rho, 17, 10), 2 * interference_approx(rho, 9, 10));
  EXPECT_DOUBLE_EQ(interference_approx(rho, 9, 20), 0.5 * interference_approx(rho, 9, 10));
  EXPECT_THROW(interference_approx(rho, 0, 10), std::invalid_argument);
}

TEST(PredictEquilibriumTest, ClosedForms) {
  const NetworkConfig cfg = make_config(5, 10, 100, 50);
  const std::vector<double> h{0.01, 0.002, 0.05, 0.0031, 0.1};
  const LsaPrediction pr = predict_equilibrium(h, cfg);
  ASSERT_TRUE(pr.feasible);
  EXPECT_FALSE(pr.below_regulatory_floor);
  const double g = gamma_bar_star(100);
  const double margin = 1.0 - g * pr.rho * 4 / 10;
  EXPECT_GE(pr.interference_sum, 0.0);
  EXPECT_LE(rel_diff(pr.gamma_bar_star, g), 0.0);
  for (std::size_t k = 0; k < h.size(); ++k) {
    EXPECT_LE(rel_diff(pr.p_pred[k], cfg.noise_power * g / (h[k] * margin)), 1e-14);
    EXPECT_LE(rel_diff(pr.u_pred[k], utility(pr.p_pred[k], g, cfg)), 1e-13);
    EXPECT_LE(rel_diff(pr.u_pred[k] / h[k], pr.u_pred[0] / h[0]), 1e-14);
  }
}

TEST(PredictEquilibriumTest, FeasibilityBoundary) {
  // K=32, N_c=50, L=100 needs 9 frames
  const std::vector<double> h(32, 1e-2);
  NetworkConfig cfg = make_config(32, 9, 50, 100);
  EXPECT_TRUE(predict_equilibrium(h, cfg).feasible);
  cfg.frames = 8;
  const LsaPrediction pr = predict_equilibrium(h, cfg);
  EXPECT_FALSE(pr.feasible);
  EXPECT_TRUE(pr.p_pred.empty());
  EXPECT_EQ(pr.n_f_min, 9);
  cfg.frames = 4;
  EXPECT_TRUE(predict_equilibrium(h, cfg).below_regulatory_floor);
  const std::vector<double> wrong(3, 1.0);
  EXPECT_THROW(predict_equilibrium(wrong, cfg), std::invalid_argument);
}

TEST(PredictEquilibriumTest, LongerCodesDominateAtFixedProcessingGain) {
  const std::vector<double> h{0.01, 0.002, 0.05, 0.0031, 0.1};
  const LsaPrediction wide = predict_equilibrium(h, make_config(5, 10, 100, 50));
  const LsaPrediction narrow = predict_equilibrium(h, make_config(5, 100, 10, 50));
  ASSERT_TRUE(wide.feasible && narrow.feasible);
  EXPECT_LT(wide.rho, narrow.rho);
  for (std::size_t k = 0; k < h.size(); ++k) {
    EXPECT_GT(wide.u_pred[k], narrow.u_pred[k]);
    EXPECT_LT(wide.p_pred[k], narrow.p_pred[k]);
  }
}

TEST(PredictEquilibriumTest, MeanInterferenceMatchesSimulation) {
  const NetworkConfig cfg = make_config(8, 20, 55, 189, 99);
  double sum = 0.0;
  const int runs = 1000;
  for (int r = 0; r < runs; ++r) {
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(r));
    const GainSet g = compute_gains(generate_channels(cfg, rng), cfg);
    for (std::size_t k = 0; k < g.users(); ++k) sum += g.interference_sum(k);
  }
  const double mean = sum / (runs * cfg.users);
  const double approx = interference_approx(load_factor(cfg.paths, cfg.chips), cfg.users, cfg.frames);
  EXPECT_LT(rel_diff(mean, approx), 0.1);
}

TEST(PredictEquilibriumTest, TracksSimulatedUtilities) {
  for (const auto& [chips, frames] : {std::pair{100, 10}, std::pair{10, 100}}) {
    const NetworkConfig cfg = make_config(5, frames, chips, 50, 3);
    std::vector<double> errors;
    for (int r = 0; r < 200; ++r) {
      Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(r));
      const GainSet g = compute_gains(generate_channels(cfg, rng), cfg);
      const EquilibriumResult eq = solve_nash(g, cfg);
      const LsaPrediction pr = predict_equilibrium(g.h_sp, cfg);
      ASSERT_TRUE(eq.converged && pr.feasible);
      for (std::size_t k = 0; k < g.users(); ++k) errors.push_back(std::abs(eq.utility[k] - pr.u_pred[k]) / pr.u_pred[k]);
    }
    std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
    EXPECT_LT(errors[errors.size() / 2], 0.05) << "N_c=" << chips;
  }
}

}  // namespace
}  // namespace uwbpc
