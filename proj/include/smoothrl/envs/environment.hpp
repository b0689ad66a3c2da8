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

#ifndef SMOOTHRL_ENVS_ENVIRONMENT_HPP
#define SMOOTHRL_ENVS_ENVIRONMENT_HPP

#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "smoothrl/errors.hpp"

namespace smoothrl::envs {

struct EnvSpec {
  std::string id;
  Eigen::Index observation_dim = 0;
  Eigen::Index action_dim = 0;
  Eigen::VectorXd action_bounds;  // symmetric: [-b_i, b_i]
  int max_episode_steps = 0;
  double observation_noise = 0.0;
  double dt = 0.0;  // control period in seconds

  void validate() const {
    if (observation_dim < 1 || action_dim < 1) throw ConfigError(id + ": dimensions must be >= 1");
    if (action_bounds.size() != action_dim || !(action_bounds.array() > 0.0).all()) {
      throw ConfigError(id + ": action bounds must be positive, one per action dimension");
    }
    if (max_episode_steps < 1) throw ConfigError(id + ": max_episode_steps must be >= 1");
    if (!(observation_noise >= 0.0)) throw ConfigError(id + ": observation noise must be >= 0");
  }
};

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  /// Episode is over, either by a terminal state or by the time limit.
  bool done = false;
  /// Episode ended in a true terminal state (no bootstrapping past it).
  bool terminal = false;
};

/// Seed derivation shared by environments and the harness: each (seed, stream)
/// pair gets an independent, reproducible generator.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  return std::mt19937_64(seq);
}

/// A continuous-control task whose agent observes the true state through
/// additive white Gaussian noise. True dynamics and observation noise draw
/// from separate seeded streams.
class Environment {
 public:
  explicit Environment(EnvSpec spec) : spec_(std::move(spec)) { spec_.validate(); }
  virtual ~Environment() = default;

  [[nodiscard]] const EnvSpec& spec() const { return spec_; }
  [[nodiscard]] bool done() const { return done_; }
  [[nodiscard]] int elapsed_steps() const { return steps_; }

  Eigen::VectorXd reset(std::uint64_t seed) {
    dynamics_rng_ = make_stream(seed, 1);
    noise_rng_ = make_stream(seed, 2);
    steps_ = 0;
    done_ = false;
    sample_initial_state(dynamics_rng_);
    return observe();
  }

  StepResult step(const Eigen::VectorXd& action) {
    if (done_) throw StateError(spec_.id + ": step() called on a finished episode; reset first");
    if (action.size() != spec_.action_dim) throw DimensionError(spec_.id + ": action dimension mismatch");
    StepResult result;
    result.reward = advance(action);
    ++steps_;
    result.terminal = is_terminal();
    result.done = result.terminal || steps_ >= spec_.max_episode_steps;
    done_ = result.done;
    result.observation = observe();
    return result;
  }

  /// Noise-free observation of the current state.
  [[nodiscard]] virtual Eigen::VectorXd true_observation() const = 0;

 protected:
  virtual void sample_initial_state(std::mt19937_64& rng) = 0;
  /// Integrates one control period and returns the reward from the true state.
  virtual double advance(const Eigen::VectorXd& action) = 0;
  [[nodiscard]] virtual bool is_terminal() const { return false; }

  /// Clears the episode bookkeeping after a test hook overwrote the state.
  void restart_episode() {
    steps_ = 0;
    done_ = false;
  }

 private:
  Eigen::VectorXd observe() {
    Eigen::VectorXd obs = true_observation();
    if (spec_.observation_noise > 0.0) {
      std::normal_distribution<double> noise(0.0, spec_.observation_noise);
      for (Eigen::Index i = 0; i < obs.size(); ++i) obs(i) += noise(noise_rng_);
    }
    return obs;
  }

  EnvSpec spec_;
  std::mt19937_64 dynamics_rng_{0};
  std::mt19937_64 noise_rng_{0};
  int steps_ = 0;
  bool done_ = false;
};

}  // namespace smoothrl::envs

#endif  // SMOOTHRL_ENVS_ENVIRONMENT_HPP
