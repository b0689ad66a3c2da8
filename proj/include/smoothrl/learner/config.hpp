/*
 * Copyright 2026 The smoothrl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SMOOTHRL_LEARNER_CONFIG_HPP
#define SMOOTHRL_LEARNER_CONFIG_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smoothrl/errors.hpp"

namespace smoothrl::learner {

enum class Mode { kVanilla, kCaps, kL2C2 };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kVanilla: return "vanilla";
    case Mode::kCaps: return "caps";
    case Mode::kL2C2: return "l2c2";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "vanilla") return Mode::kVanilla;
  if (s == "caps") return Mode::kCaps;
  if (s == "l2c2") return Mode::kL2C2;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected vanilla, caps or l2c2)");
}

struct DerivedGains {
  double epsilon = 0.0;
  double lambda_pi = 0.0;
  double lambda_v = 0.0;
};

/// Distance offset and base gains that confine the effective policy gain
/// lambda_pi / d to [lambda_lower, lambda_upper] over the sampling box:
///   epsilon   = sigma * lambda_lower / (lambda_upper - sigma * lambda_lower)
///   lambda_pi = lambda_upper * epsilon
///   lambda_v  = beta * lambda_pi
inline DerivedGains derive_gains(double sigma, double lambda_lower, double lambda_upper, double beta) {
  if (!std::isfinite(sigma) || !std::isfinite(lambda_lower) || !std::isfinite(lambda_upper) ||
      !std::isfinite(beta)) {
    throw ConfigError("derive_gains: parameters must be finite");
  }
  if (!(sigma > 0.0)) throw ConfigError("l2c2.sigma must be > 0");
  if (!(lambda_lower > 0.0)) throw ConfigError("l2c2.lambda_lower must be > 0");
  if (!(lambda_upper > sigma * lambda_lower)) {
    throw ConfigError("l2c2.lambda_upper must exceed l2c2.sigma * l2c2.lambda_lower");
  }
  if (!(beta >= 0.0)) throw ConfigError("l2c2.beta must be >= 0");
  DerivedGains g;
  g.epsilon = sigma * lambda_lower / (lambda_upper - sigma * lambda_lower);
  g.lambda_pi = lambda_upper * g.epsilon;
  g.lambda_v = beta * g.lambda_pi;
  return g;
}

struct L2C2Config {
  double sigma = 1.0;
  double lambda_lower = 0.01;
  double lambda_upper = 1.0;
  double beta = 0.1;
  /// Optional overrides of the derived base gains (ablations only).
  std::optional<double> lambda_pi_override;
  std::optional<double> lambda_v_override;

  [[nodiscard]] DerivedGains gains() const {
    DerivedGains g = derive_gains(sigma, lambda_lower, lambda_upper, beta);
    if (lambda_pi_override) g.lambda_pi = *lambda_pi_override;
    if (lambda_v_override) g.lambda_v = *lambda_v_override;
    return g;
  }
  /// Half-width of the uniform sampling interval of the travel fraction u.
  [[nodiscard]] double sampling_half_width() const {
    return sigma + (sigma - 1.0) * gains().epsilon;
  }
  void validate() const {
    (void)gains();
    if (lambda_pi_override && !(*lambda_pi_override >= 0.0)) throw ConfigError("l2c2.lambda_pi must be >= 0");
    if (lambda_v_override && !(*lambda_v_override >= 0.0)) throw ConfigError("l2c2.lambda_v must be >= 0");
  }
};

struct CapsConfig {
  double sigma = 0.2;
  double lambda_t = 0.01;
  double lambda_s = 0.05;

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("caps.sigma must be > 0");
    if (!(lambda_t >= 0.0) || !std::isfinite(lambda_t)) throw ConfigError("caps.lambda_t must be >= 0");
    if (!(lambda_s >= 0.0) || !std::isfinite(lambda_s)) throw ConfigError("caps.lambda_s must be >= 0");
  }
};

struct AgentConfig {
  Mode mode = Mode::kVanilla;
  double gamma = 0.99;
  double tau = 0.1;
  /// Importance-ratio clip radius c: ratios are clipped to [max(0, 1 - c), 1 + c].
  /// Infinity disables the ratio entirely.
  double clip_radius = 1.0;
  /// Weight eta of the -eta * sum_i log std_i term added to the policy loss.
  /// It keeps the exploration noise from collapsing onto the std floor.
  double entropy_coef = 0.005;
  int heads = 5;
  std::vector<long> hidden{100, 100};
  double learning_rate = 1e-3;
  /// Scale of the initial policy output-layer weights (small initial actions).
  double policy_output_scale = 0.01;
  L2C2Config l2c2;
  CapsConfig caps;

  void validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in (0, 1]");
    if (!(clip_radius > 0.0)) throw ConfigError("policy.clip must be > 0 (inf disables)");
    if (!(entropy_coef >= 0.0) || !std::isfinite(entropy_coef)) throw ConfigError("policy.entropy must be >= 0");
    if (heads < 1) throw ConfigError("value.heads must be >= 1");
    if (hidden.empty()) throw ConfigError("network.hidden needs at least one layer");
    for (long h : hidden) {
      if (h < 2) throw ConfigError("network.hidden widths must be >= 2");
    }
    if (!(learning_rate > 0.0)) throw ConfigError("optimizer.lr must be > 0");
    l2c2.validate();
    caps.validate();
  }
};

}  // namespace smoothrl::learner

#endif  // SMOOTHRL_LEARNER_CONFIG_HPP
