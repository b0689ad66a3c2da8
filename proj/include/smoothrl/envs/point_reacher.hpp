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

#ifndef SMOOTHRL_ENVS_POINT_REACHER_HPP
#define SMOOTHRL_ENVS_POINT_REACHER_HPP

#include <algorithm>
#include <cmath>

#include "smoothrl/envs/environment.hpp"

namespace smoothrl::envs {

struct PointReacherParams {
  double force_gain = 2.0;
  double damping = 1.0;
  double action_cost = 0.01;
  double capture_radius = 0.05;
  double dt = 0.05;
  int substeps = 2;
  int max_steps = 150;
  double noise = 0.01;
};

/// 2-D point mass driven towards a random goal inside the square [-1, 1]^2.
///
///   v' = (force_gain * a - damping * v), p' = v
/// integrated with semi-implicit Euler; the position is clamped to the arena
/// and the velocity component into a wall is zeroed.
///
/// Observation: [goal - position (2), velocity (2)].
/// Reward: -|position - goal| - c |a|^2 on the pre-step state. The episode terminates when the
/// point comes within `capture_radius` of the goal.
class PointReacher final : public Environment {
 public:
  using Params = PointReacherParams;

  static EnvSpec make_spec(const Params& p) {
    EnvSpec s;
    s.id = "point-reacher";
    s.observation_dim = 4;
    s.action_dim = 2;
    s.action_bounds = Eigen::VectorXd::Ones(2);
    s.max_episode_steps = p.max_steps;
    s.observation_noise = p.noise;
    s.dt = p.dt;
    return s;
  }

  explicit PointReacher(Params params = {}) : Environment(make_spec(params)), p_(params) {}

  [[nodiscard]] Eigen::VectorXd true_observation() const override {
    Eigen::VectorXd obs(4);
    obs << goal_ - position_, velocity_;
    return obs;
  }

  [[nodiscard]] const Eigen::Vector2d& position() const { return position_; }
  [[nodiscard]] const Eigen::Vector2d& velocity() const { return velocity_; }
  [[nodiscard]] const Eigen::Vector2d& goal() const { return goal_; }
  [[nodiscard]] const Params& params() const { return p_; }

  /// Test hook: overwrite the true state and restart the step counter.
  void set_state(const Eigen::Vector2d& position, const Eigen::Vector2d& velocity,
                 const Eigen::Vector2d& goal) {
    position_ = position;
    velocity_ = velocity;
    goal_ = goal;
    restart_episode();
  }

 protected:
  void sample_initial_state(std::mt19937_64& rng) override {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    position_ = Eigen::Vector2d(coord(rng), coord(rng));
    goal_ = Eigen::Vector2d(coord(rng), coord(rng));
    velocity_.setZero();
  }

  double advance(const Eigen::VectorXd& action) override {
    const Eigen::Vector2d a = action.cwiseMax(-1.0).cwiseMin(1.0);
    const double reward = -(position_ - goal_).norm() - p_.action_cost * a.squaredNorm();
    const double h = p_.dt / p_.substeps;
    for (int i = 0; i < p_.substeps; ++i) {
      velocity_ += h * (p_.force_gain * a - p_.damping * velocity_);
      position_ += h * velocity_;
      for (int d = 0; d < 2; ++d) {
        if (position_(d) > 1.0 || position_(d) < -1.0) {
          position_(d) = std::clamp(position_(d), -1.0, 1.0);
          velocity_(d) = 0.0;
        }
      }
    }
    return reward;
  }

  [[nodiscard]] bool is_terminal() const override {
    return (position_ - goal_).norm() < p_.capture_radius;
  }

 private:
  Params p_;
  Eigen::Vector2d position_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d goal_ = Eigen::Vector2d::Zero();
};

}  // namespace smoothrl::envs

#endif  // SMOOTHRL_ENVS_POINT_REACHER_HPP
