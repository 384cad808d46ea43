#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace uwbpc {

// Raised for any invalid or unparseable configuration. `key()` names the
// offending field so front ends can report it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class Schedule { synchronous, sequential };

inline const char* to_string(Schedule s) {
  return s == Schedule::synchronous ? "sync" : "seq";
}

inline Schedule parse_schedule(const std::string& s) {
  if (s == "sync" || s == "synchronous" || s == "jacobi") return Schedule::synchronous;
  if (s == "seq" || s == "sequential" || s == "gauss-seidel") return Schedule::sequential;
  throw ConfigError("schedule", "expected 'sync' or 'seq', got '" + s + "'");
}

/// Scalar system parameters of one uplink scenario. Powers are in Watts,
/// distances in meters, rate in bits/s.
///
/// The defaults are the reference operating point: 100-bit packets with no
/// overhead, 100 kb/s, 5e-16 W noise, 1 uW power cap, users 3..20 m away.
/// `users`, `frames`, `chips` and `paths` have no meaningful default and are
/// left at zero; `validate()` rejects them until they are set.
struct NetworkConfig {
  int users = 0;            // K
  int frames = 0;           // N_f, pulses per symbol
  int chips = 0;            // N_c, chip positions per frame
  int paths = 0;            // L, resolvable multipath components
  double noise_power = 5e-16;
  double p_max = 1e-6;
  double p_min = 0.0;
  double rate = 1e5;
  int info_bits = 100;      // D
  int total_bits = 100;     // M
  double dist_min = 3.0;
  double dist_max = 20.0;
  std::optional<double> pdp_decay;  // unset means paths / 4
  double path_loss_exp = 2.0;
  std::uint64_t seed = 1;

  int processing_gain() const { return frames * chips; }

  double decay() const { return pdp_decay.value_or(paths / 4.0); }

  double goodput_scale() const {
    return static_cast<double>(info_bits) / total_bits * rate;
  }

  void validate() const {
    validate_shape();
    validate_scalars();
  }

  void validate_shape() const {
    if (users < 1) throw ConfigError("K", "number of users must be >= 1");
    if (frames < 1) throw ConfigError("N_f", "number of frames must be >= 1");
    if (chips < 1) throw ConfigError("N_c", "chips per frame must be >= 1");
    if (paths < 1) throw ConfigError("L", "number of paths must be >= 1");
  }

  // Everything except the four dimensions, which have no default.
  void validate_scalars() const {
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
      throw ConfigError("sigma2", "noise power must be positive and finite");
    if (!(p_max > 0.0) || !std::isfinite(p_max))
      throw ConfigError("p_max", "maximum power must be positive and finite");
    if (!(p_min >= 0.0) || !(p_min < p_max))
      throw ConfigError("p_min", "need 0 <= p_min < p_max");
    if (!(rate > 0.0)) throw ConfigError("rate", "rate must be positive");
    if (total_bits < 1) throw ConfigError("M", "packet length must be >= 1");
    if (info_bits < 1 || info_bits > total_bits)
      throw ConfigError("D", "need 1 <= D <= M");
    if (!(dist_min > 0.0)) throw ConfigError("dist_min", "distance must be positive");
    if (!(dist_min <= dist_max)) throw ConfigError("dist_max", "need dist_min <= dist_max");
    if (pdp_decay && !(*pdp_decay > 0.0))
      throw ConfigError("pdp_decay", "decay constant must be positive (inf allowed)");
    if (!std::isfinite(path_loss_exp) || path_loss_exp < 0.0)
      throw ConfigError("path_loss_exp", "path-loss exponent must be finite and >= 0");
  }
};

}  // namespace uwbpc
