#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwbpc/channel.hpp"
#include "uwbpc/config.hpp"

namespace uwbpc {

class DegenerateChannelError : public std::runtime_error {
 public:
  explicit DegenerateChannelError(std::size_t user)
      : std::runtime_error("user " + std::to_string(user) + " has an all-zero channel vector"),
        user_(user) {}
  std::size_t user() const noexcept { return user_; }

 private:
  std::size_t user_;
};

/// All-Rake output gains of one realization.
///
/// `h_mai(k, j)` is the gain with which user j's power leaks into user k's
/// decision statistic; the diagonal is zero and unused. `zeta[k]` is
/// +infinity exactly when `h_si[k] == 0`.
struct GainSet {
  std::vector<double> h_sp;
  std::vector<double> h_si;
  Eigen::MatrixXd h_mai;
  std::vector<double> zeta;
  std::vector<double> mu_inv;
  int processing_gain = 0;
  int chips = 0;

  std::size_t users() const { return h_sp.size(); }

  /// zeta^-1 + mu^-1, the total normalized interference seen by user k.
  double interference_sum(std::size_t k) const { return 1.0 / zeta[k] + mu_inv[k]; }
};

/// Shifted-tail matrix of a channel vector: L x (L-1), entry (r, c) =
/// alpha[L - c + r] for r <= c (1-based), zero elsewhere. The last row is
/// all zeros; L = 1 gives an L x 0 matrix.
inline Eigen::MatrixXd build_a_matrix(std::span<const double> alpha) {
  const auto L = static_cast<Eigen::Index>(alpha.size());
  if (L < 1) throw std::invalid_argument("build_a_matrix: empty channel vector");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(L, L - 1);
  for (Eigen::Index c = 1; c <= L - 1; ++c) {
    for (Eigen::Index r = 1; r <= c; ++r) a(r - 1, c - 1) = alpha[static_cast<std::size_t>(L - c + r - 1)];
  }
  return a;
}

/// Partial-overlap weights: diag(phi_1..phi_{L-1}), phi_l = sqrt(min(L-l, N_c)/N_c).
inline Eigen::MatrixXd build_phi_matrix(int paths, int chips) {
  if (paths < 1 || chips < 1) throw std::invalid_argument("build_phi_matrix: need L >= 1, N_c >= 1");
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(paths - 1, paths - 1);
  for (int l = 1; l <= paths - 1; ++l) {
    phi(l - 1, l - 1) = std::sqrt(static_cast<double>(std::min(paths - l, chips)) / chips);
  }
  return phi;
}

namespace detail {

// (A(a)^T b)_c for c = 1..L-1 without forming A: the correlation of a
// against b at lag L - c.
inline double shifted_product(std::span<const double> a, std::span<const double> b, std::size_t c) {
  const std::size_t L = a.size();
  double s = 0.0;
  for (std::size_t r = 0; r < c; ++r) s += a[L - c + r] * b[r];
  return s;
}

}  // namespace detail

/// Desired-signal, self-interference and multiple-access gains for every
/// user of a realization (real channels, so Hermitian transposes are plain
/// transposes).
inline GainSet compute_gains(const ChannelRealization& ch, const NetworkConfig& config) {
  const std::size_t K = ch.users();
  const std::size_t L = ch.paths();
  const double G = config.processing_gain();
  const int Nc = config.chips;
  if (G < 1 || Nc < 1) throw ConfigError("N_f", "processing gain must be >= 1");
  if (L < 1) throw ConfigError("L", "channel has no paths");

  GainSet g;
  g.processing_gain = config.processing_gain();
  g.chips = Nc;
  g.h_sp.resize(K);
  g.h_si.resize(K);
  g.zeta.resize(K);
  g.mu_inv.assign(K, 0.0);
  g.h_mai = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));

  std::vector<double> phi2(L > 1 ? L - 1 : 0);
  for (std::size_t c = 1; c < L; ++c) {
    phi2[c - 1] = static_cast<double>(std::min<std::size_t>(L - c, static_cast<std::size_t>(Nc))) / Nc;
  }

  for (std::size_t k = 0; k < K; ++k) {
    std::span<const double> a(ch.alpha[k]);
    double norm2 = 0.0;
    for (double x : a) norm2 += x * x;
    if (!(norm2 > 0.0)) throw DegenerateChannelError(k);
    g.h_sp[k] = norm2;

    double si = 0.0;
    for (std::size_t c = 1; c < L; ++c) {
      const double v = 2.0 * detail::shifted_product(a, a, c);
      si += phi2[c - 1] * v * v;
    }
    g.h_si[k] = si / (G * norm2);
    g.zeta[k] = g.h_si[k] > 0.0 ? norm2 / g.h_si[k] : std::numeric_limits<double>::infinity();
  }

  // The bracketed numerator is symmetric in (k, j); compute it once per pair.
  for (std::size_t k = 0; k < K; ++k) {
    std::span<const double> ak(ch.alpha[k]);
    for (std::size_t j = k + 1; j < K; ++j) {
      std::span<const double> aj(ch.alpha[j]);
      double num = 0.0;
      for (std::size_t c = 1; c < L; ++c) {
        const double x = detail::shifted_product(ak, aj, c);
        const double y = detail::shifted_product(aj, ak, c);
        num += x * x + y * y;
      }
      double dot = 0.0;
      for (std::size_t l = 0; l < L; ++l) dot += ak[l] * aj[l];
      num += dot * dot;
      const auto ik = static_cast<Eigen::Index>(k);
      const auto ij = static_cast<Eigen::Index>(j);
      g.h_mai(ik, ij) = num / (G * g.h_sp[k]);
      g.h_mai(ij, ik) = num / (G * g.h_sp[j]);
    }
  }

  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < K; ++j) {
      if (j != k) g.mu_inv[k] += g.h_mai(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) / g.h_sp[j];
    }
  }
  return g;
}

/// Same gains at a different number of frames. SI and MAI gains scale as
/// 1/G while the partial-overlap weights depend only on N_c, so this is
/// exact as long as N_c is unchanged.
inline GainSet with_frames(GainSet g, int frames) {
  if (frames < 1) throw ConfigError("N_f", "number of frames must be >= 1");
  const int new_gain = frames * g.chips;
  const double factor = static_cast<double>(g.processing_gain) / new_gain;
  for (std::size_t k = 0; k < g.users(); ++k) {
    g.h_si[k] *= factor;
    g.zeta[k] /= factor;
    g.mu_inv[k] *= factor;
  }
  g.h_mai *= factor;
  g.processing_gain = new_gain;
  return g;
}

}  // namespace uwbpc
