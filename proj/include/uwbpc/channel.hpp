#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "uwbpc/config.hpp"

namespace uwbpc {

using Rng = std::mt19937_64;

/// Independent stream for one Monte Carlo draw. Depends only on
/// (seed, index), so results do not depend on worker scheduling.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

/// Tapped-delay-line channels of all users for one realization.
struct ChannelRealization {
  std::vector<std::vector<double>> alpha;  // [user][path]
  std::vector<int> delta;                  // chip-aligned delay index in [0, G)
  std::vector<double> distance;            // meters
  std::vector<double> h;                   // ||alpha_k||^2

  std::size_t users() const { return alpha.size(); }
  std::size_t paths() const { return alpha.empty() ? 0 : alpha.front().size(); }
};

/// Relative tap variances exp(-(l-1)/decay), l = 1..L, normalized to sum 1.
/// An infinite decay gives the uniform profile.
inline std::vector<double> tap_profile(int paths, double decay) {
  std::vector<double> v(static_cast<std::size_t>(paths), 1.0);
  if (std::isfinite(decay)) {
    for (int l = 0; l < paths; ++l) v[static_cast<std::size_t>(l)] = std::exp(-l / decay);
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  for (double& x : v) x /= sum;
  return v;
}

/// Mean channel power at distance d with a 1 m reference distance.
inline double average_gain(double distance, double path_loss_exp) {
  return std::pow(1.0 / distance, path_loss_exp);
}

/// Draws one realization: d_k ~ U[dist_min, dist_max], real Gaussian taps
/// with exponentially decaying variance scaled so E||alpha_k||^2 equals the
/// average gain at d_k, and Delta_k ~ U{0..G-1}.
inline ChannelRealization generate_channels(const NetworkConfig& config, Rng& rng) {
  config.validate();
  const auto users = static_cast<std::size_t>(config.users);
  const auto paths = static_cast<std::size_t>(config.paths);
  const std::vector<double> profile = tap_profile(config.paths, config.decay());

  std::uniform_real_distribution<double> dist(config.dist_min, config.dist_max);
  std::uniform_int_distribution<int> delay(0, config.processing_gain() - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ChannelRealization ch;
  ch.alpha.assign(users, std::vector<double>(paths));
  ch.delta.resize(users);
  ch.distance.resize(users);
  ch.h.resize(users);
  for (std::size_t k = 0; k < users; ++k) {
    // dist_min == dist_max is allowed; uniform_real_distribution needs a < b.
    const double d = config.dist_min < config.dist_max ? dist(rng) : config.dist_min;
    const double scale = average_gain(d, config.path_loss_exp);
    double norm2 = 0.0;
    for (std::size_t l = 0; l < paths; ++l) {
      const double a = gauss(rng) * std::sqrt(profile[l] * scale);
      ch.alpha[k][l] = a;
      norm2 += a * a;
    }
    ch.distance[k] = d;
    ch.h[k] = norm2;
    ch.delta[k] = delay(rng);
  }
  return ch;
}

}  // namespace uwbpc
