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

#ifndef SMOOTHRL_LEARNER_REGULARIZERS_HPP
#define SMOOTHRL_LEARNER_REGULARIZERS_HPP

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "smoothrl/errors.hpp"
#include "smoothrl/learner/config.hpp"
#include "smoothrl/policy/gaussian.hpp"

namespace smoothrl::learner {

// ---------------------------------------------------------------------------
// Local Lipschitz regularization.
//
// The neighbourhood of s is the box U_s(s') = { s~ : d(s, s~; s') <= sigma },
// built from the observed transition s -> s'. Its extended distance is the
// L-infinity norm of the per-dimension travel fraction plus epsilon:
//
//   d(s, s~; s') = max_i |(s~_i - s_i) / (s'_i - s_i)| + epsilon
//
// Dimensions with s'_i == s_i contribute 0 (sample_tilde never moves them).
// Samples are s~ = s + (s' - s) * u with u_i ~ U(-w, w), w = sigma + (sigma - 1) eps,
// so d ranges over [eps, sigma (1 + eps)] and lambda / d over
// [lambda_lower, lambda_upper].
// ---------------------------------------------------------------------------

template <typename Rng>
Eigen::VectorXd sample_tilde(const Eigen::VectorXd& s, const Eigen::VectorXd& s_next,
                             const L2C2Config& cfg, Rng& rng) {
  if (s.size() != s_next.size()) throw DimensionError("sample_tilde: state dimension mismatch");
  const double w = cfg.sampling_half_width();
  std::uniform_real_distribution<double> u(-w, w);
  Eigen::VectorXd out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) out(i) = s(i) + (s_next(i) - s(i)) * u(rng);
  return out;
}

inline double state_distance(const Eigen::VectorXd& s, const Eigen::VectorXd& s_tilde,
                             const Eigen::VectorXd& s_next, double epsilon) {
  if (s.size() != s_tilde.size() || s.size() != s_next.size()) {
    throw DimensionError("state_distance: state dimension mismatch");
  }
  double ratio = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double span = s_next(i) - s(i);
    if (span == 0.0) continue;
    ratio = std::max(ratio, std::abs((s_tilde(i) - s(i)) / span));
  }
  return ratio + epsilon;
}

struct L2C2Terms {
  double policy = 0.0;
  double value = 0.0;
};

/// Single-sample estimates of the policy and value regularizers for one
/// (s, s~) pair: lambda_pi * H^2(pi(s), pi(s~)) / d and
/// lambda_v * 0.5 * |V(s) - V(s~)|^2 / d, with V the head vector.
inline L2C2Terms l2c2_terms(const policy::GaussianPolicyOutput& pi_s,
                            const policy::GaussianPolicyOutput& pi_tilde,
                            const Eigen::VectorXd& v_s, const Eigen::VectorXd& v_tilde, double d,
                            const DerivedGains& gains) {
  if (!(d > 0.0)) throw ConfigError("l2c2_terms: distance must be positive");
  if (v_s.size() != v_tilde.size()) throw DimensionError("l2c2_terms: value head count mismatch");
  L2C2Terms t;
  t.policy = gains.lambda_pi * policy::hellinger_sq(pi_s, pi_tilde) / d;
  t.value = gains.lambda_v * 0.5 * (v_s - v_tilde).squaredNorm() / d;
  return t;
}

struct L2C2TermGrads {
  policy::HellingerGrad policy;  // first: w.r.t. pi(s), second: w.r.t. pi(s~)
  Eigen::VectorXd value_s;
  Eigen::VectorXd value_tilde;
};

inline L2C2TermGrads l2c2_terms_grad(const policy::GaussianPolicyOutput& pi_s,
                                     const policy::GaussianPolicyOutput& pi_tilde,
                                     const Eigen::VectorXd& v_s, const Eigen::VectorXd& v_tilde,
                                     double d, const DerivedGains& gains) {
  L2C2TermGrads g;
  g.policy = policy::hellinger_sq_grad(pi_s, pi_tilde);
  const double kp = gains.lambda_pi / d;
  g.policy.first.mean *= kp;
  g.policy.first.std *= kp;
  g.policy.second.mean *= kp;
  g.policy.second.std *= kp;
  const double kv = gains.lambda_v / d;
  g.value_s = kv * (v_s - v_tilde);
  g.value_tilde = -g.value_s;
  return g;
}

// ---------------------------------------------------------------------------
// CAPS: constant-gain temporal and spatial smoothing of the policy mean,
//   lambda_t * 0.5 |mu(s) - mu(s')|^2 + lambda_s * 0.5 |mu(s) - mu(s~)|^2,
// with s~ ~ N(s, sigma_caps^2 I).
// ---------------------------------------------------------------------------

template <typename Rng>
Eigen::VectorXd sample_caps_tilde(const Eigen::VectorXd& s, const CapsConfig& cfg, Rng& rng) {
  std::normal_distribution<double> noise(0.0, cfg.sigma);
  Eigen::VectorXd out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) out(i) = s(i) + noise(rng);
  return out;
}

inline double caps_term(const Eigen::VectorXd& mu_s, const Eigen::VectorXd& mu_next,
                        const Eigen::VectorXd& mu_tilde, const CapsConfig& cfg) {
  if (mu_s.size() != mu_next.size() || mu_s.size() != mu_tilde.size()) {
    throw DimensionError("caps_term: action dimension mismatch");
  }
  return cfg.lambda_t * 0.5 * (mu_s - mu_next).squaredNorm() +
         cfg.lambda_s * 0.5 * (mu_s - mu_tilde).squaredNorm();
}

struct CapsTermGrads {
  Eigen::VectorXd mu_s;
  Eigen::VectorXd mu_next;
  Eigen::VectorXd mu_tilde;
};

inline CapsTermGrads caps_term_grad(const Eigen::VectorXd& mu_s, const Eigen::VectorXd& mu_next,
                                    const Eigen::VectorXd& mu_tilde, const CapsConfig& cfg) {
  CapsTermGrads g;
  g.mu_next = -cfg.lambda_t * (mu_s - mu_next);
  g.mu_tilde = -cfg.lambda_s * (mu_s - mu_tilde);
  g.mu_s = -(g.mu_next + g.mu_tilde);
  return g;
}

}  // namespace smoothrl::learner

#endif  // SMOOTHRL_LEARNER_REGULARIZERS_HPP
