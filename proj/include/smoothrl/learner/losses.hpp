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

#ifndef SMOOTHRL_LEARNER_LOSSES_HPP
#define SMOOTHRL_LEARNER_LOSSES_HPP

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace smoothrl::learner {

/// y = r + gamma * V_target(s'), with no bootstrap past a terminal state.
inline double td_target(double reward, double target_value_next, bool done, double gamma) {
  return done ? reward : reward + gamma * target_value_next;
}

/// Ensemble value: arithmetic mean of the heads.
inline double ensemble_value(const Eigen::VectorXd& heads) { return heads.mean(); }

/// weight * 0.5 * (y - mean(heads))^2; y is a constant.
inline double value_loss(double target, const Eigen::VectorXd& heads, double weight) {
  const double err = target - ensemble_value(heads);
  return weight * 0.5 * err * err;
}

/// d value_loss / d heads.
inline Eigen::VectorXd value_loss_grad(double target, const Eigen::VectorXd& heads, double weight) {
  const double err = target - ensemble_value(heads);
  return Eigen::VectorXd::Constant(heads.size(), -weight * err / static_cast<double>(heads.size()));
}

/// Importance-ratio coefficient applied to the policy loss. With an infinite
/// clip radius the ratio is not used at all and the coefficient is 1.
inline double ratio_coefficient(double log_density, double behavior_log_density, double clip_radius) {
  if (std::isinf(clip_radius)) return 1.0;
  const double ratio = std::exp(std::min(log_density - behavior_log_density, 50.0));
  return std::clamp(ratio, std::max(0.0, 1.0 - clip_radius), 1.0 + clip_radius);
}

struct PolicyLoss {
  double value = 0.0;
  /// d loss / d log_density with advantage and coefficient held constant.
  double grad_log_density = 0.0;
  double coefficient = 1.0;
};

/// -weight * coef * A * log pi(a|s) with the advantage A = y - V(s) and the
/// clipped ratio coefficient both treated as constants.
inline PolicyLoss policy_loss(double advantage, double log_density, double coefficient, double weight) {
  PolicyLoss out;
  out.coefficient = coefficient;
  out.grad_log_density = -weight * coefficient * advantage;
  out.value = out.grad_log_density * log_density;
  return out;
}

inline PolicyLoss policy_loss(double target, double value, double log_density,
                              double behavior_log_density, double clip_radius, double weight) {
  return policy_loss(target - value, log_density,
                     ratio_coefficient(log_density, behavior_log_density, clip_radius), weight);
}

}  // namespace smoothrl::learner

#endif  // SMOOTHRL_LEARNER_LOSSES_HPP
