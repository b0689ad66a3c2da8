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

#ifndef SMOOTHRL_ENVS_PENDULUM_HPP
#define SMOOTHRL_ENVS_PENDULUM_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smoothrl/envs/environment.hpp"

namespace smoothrl::envs {

struct PendulumParams {
  double gravity = 10.0;
  double mass = 1.0;
  double length = 1.0;
  double max_torque = 2.0;
  double max_speed = 8.0;
  double action_cost = 0.01;
  double dt = 0.05;
  int substeps = 10;
  int max_steps = 200;
  double noise = 0.01;
};

/// Torque-limited pendulum swing-up.
///
/// theta is measured from the upright position and wrapped to (-pi, pi].
/// Dynamics (uniform rod pivoting at one end):
///   theta_ddot = 3 g / (2 l) * sin(theta) + 3 / (m l^2) * u
/// integrated with semi-implicit Euler, `substeps` substeps per control period.
/// The torque limit (2) is well below the gravity torque at the horizontal
/// (m g l / 2 = 5), so reaching the top requires pumping energy over several
/// swings.
///
/// Observation: [cos theta, sin theta, theta_dot]; reward: cos theta - c u^2,
/// evaluated on the state the torque is applied in.
/// Initial state: theta ~ U(-pi, pi], theta_dot ~ U(-1, 1).
class Pendulum final : public Environment {
 public:
  using Params = PendulumParams;

  static EnvSpec make_spec(const Params& p) {
    EnvSpec s;
    s.id = "pendulum-swingup";
    s.observation_dim = 3;
    s.action_dim = 1;
    s.action_bounds = Eigen::VectorXd::Constant(1, p.max_torque);
    s.max_episode_steps = p.max_steps;
    s.observation_noise = p.noise;
    s.dt = p.dt;
    return s;
  }

  explicit Pendulum(Params params = {}) : Environment(make_spec(params)), p_(params) {}

  [[nodiscard]] Eigen::VectorXd true_observation() const override {
    return Eigen::Vector3d(std::cos(theta_), std::sin(theta_), theta_dot_);
  }

  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] double theta_dot() const { return theta_dot_; }
  [[nodiscard]] const Params& params() const { return p_; }

  /// Mechanical energy per unit inertia, zero at the hanging rest state.
  [[nodiscard]] double energy() const {
    return 0.5 * theta_dot_ * theta_dot_ + gravity_coefficient() * (1.0 + std::cos(theta_));
  }

  /// Test hook: overwrite the true state and restart the step counter.
  void set_state(double theta, double theta_dot) {
    theta_ = wrap(theta);
    theta_dot_ = theta_dot;
    restart_episode();
  }

  static double wrap(double angle) {
    double a = std::remainder(angle, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
  }

 protected:
  void sample_initial_state(std::mt19937_64& rng) override {
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> speed(-1.0, 1.0);
    theta_ = wrap(angle(rng));
    theta_dot_ = speed(rng);
  }

  double advance(const Eigen::VectorXd& action) override {
    const double u = std::clamp(action(0), -p_.max_torque, p_.max_torque);
    const double h = p_.dt / p_.substeps;
    const double k = gravity_coefficient();
    const double torque_gain = 3.0 / (p_.mass * p_.length * p_.length);
    const double reward = std::cos(theta_) - p_.action_cost * u * u;
    for (int i = 0; i < p_.substeps; ++i) {
      theta_dot_ += h * (k * std::sin(theta_) + torque_gain * u);
      theta_dot_ = std::clamp(theta_dot_, -p_.max_speed, p_.max_speed);
      theta_ += h * theta_dot_;
    }
    theta_ = wrap(theta_);
    return reward;
  }

 private:
  [[nodiscard]] double gravity_coefficient() const { return 1.5 * p_.gravity / p_.length; }

  Params p_;
  double theta_ = std::numbers::pi;
  double theta_dot_ = 0.0;
};

}  // namespace smoothrl::envs

#endif  // SMOOTHRL_ENVS_PENDULUM_HPP
