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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "smoothrl/envs/catalog.hpp"
#include "smoothrl/envs/pendulum.hpp"
#include "smoothrl/envs/point_reacher.hpp"
#include "smoothrl/errors.hpp"

namespace {

using namespace smoothrl;
using envs::Pendulum;
using envs::PointReacher;

Pendulum::Params noiseless_pendulum() {
  Pendulum::Params p;
  p.noise = 0.0;
  return p;
}

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

TEST(Catalog, ListsBothTasks) {
  const auto specs = envs::env_catalog();
  ASSERT_GE(specs.size(), 2u);
  bool found_pendulum = false, found_reacher = false;
  for (const auto& s : specs) {
    EXPECT_TRUE((s.action_bounds.array() > 0.0).all()) << s.id;
    EXPECT_EQ(s.action_bounds.size(), s.action_dim);
    if (s.id == "pendulum-swingup") {
      found_pendulum = true;
      EXPECT_EQ(s.observation_dim, 3);
      EXPECT_EQ(s.action_dim, 1);
      EXPECT_EQ(s.observation_noise, 0.01);
      EXPECT_EQ(s.max_episode_steps, 200);
      EXPECT_EQ(s.dt, 0.05);
    }
    if (s.id == "point-reacher") {
      found_reacher = true;
      EXPECT_EQ(s.observation_dim, 4);
      EXPECT_EQ(s.action_dim, 2);
      EXPECT_EQ(s.observation_noise, 0.01);
      EXPECT_EQ(s.max_episode_steps, 150);
    }
  }
  EXPECT_TRUE(found_pendulum);
  EXPECT_TRUE(found_reacher);
}

TEST(Catalog, MakeEnvAndNoiseOverride) {
  auto env = envs::make_env("pendulum-swingup", 0.001);
  EXPECT_EQ(env->spec().observation_noise, 0.001);
  EXPECT_THROW(envs::make_env("hopper"), ConfigError);
  EXPECT_THROW(envs::make_env("pendulum-swingup", -1.0), ConfigError);
}

TEST(Pendulum, TorqueLimitIsBelowHorizontalGravityTorque) {
  const Pendulum::Params p;
  EXPECT_LT(p.max_torque, p.mass * p.gravity * p.length / 2.0);
}

TEST(Pendulum, SameSeedSameObservation) {
  Pendulum a, b;
  EXPECT_EQ(a.reset(7), b.reset(7));
  EXPECT_NE(a.reset(7), a.reset(8));
}

TEST(Pendulum, ZeroNoiseObservesTrueState) {
  Pendulum env(noiseless_pendulum());
  const auto obs = env.reset(3);
  EXPECT_EQ(obs, env.true_observation());
  EXPECT_NEAR(obs(0), std::cos(env.theta()), 1e-15);
  EXPECT_NEAR(obs(1), std::sin(env.theta()), 1e-15);
  EXPECT_EQ(obs(2), env.theta_dot());
}

TEST(Pendulum, InitialAngleIsUniform) {
  // one-sample Kolmogorov-Smirnov test against U(-pi, pi) at the 1% level
  const int n = 1000;
  std::vector<double> angles;
  Pendulum env;
  for (int k = 0; k < n; ++k) {
    env.reset(static_cast<std::uint64_t>(k));
    angles.push_back(env.theta());
  }
  std::sort(angles.begin(), angles.end());
  double d = 0.0;
  for (int k = 0; k < n; ++k) {
    const double cdf = (angles[k] + std::numbers::pi) / (2.0 * std::numbers::pi);
    d = std::max({d, (k + 1.0) / n - cdf, cdf - static_cast<double>(k) / n});
  }
  EXPECT_LT(d, 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST(Pendulum, HangingEquilibriumIsStationary) {
  Pendulum env(noiseless_pendulum());
  env.reset(0);
  env.set_state(std::numbers::pi, 0.0);
  for (int k = 0; k < 50; ++k) {
    env.step(scalar(0.0));
    EXPECT_NEAR(std::abs(env.theta()), std::numbers::pi, 1e-12);
    EXPECT_NEAR(env.theta_dot(), 0.0, 1e-12);
  }
}

TEST(Pendulum, UprightRewardIsOne) {
  Pendulum env(noiseless_pendulum());
  env.reset(0);
  env.set_state(0.0, 0.0);
  EXPECT_EQ(env.step(scalar(0.0)).reward, 1.0);
  env.set_state(0.0, 0.0);
  const double c = env.params().action_cost;
  EXPECT_NEAR(env.step(scalar(1.5)).reward, 1.0 - c * 2.25, 1e-15);
}

TEST(Pendulum, UntorquedEnergyDriftBelowOnePercent) {
  Pendulum env(noiseless_pendulum());
  env.reset(0);
  for (double theta0 : {0.5, 1.5, 2.5, 3.0}) {
    env.set_state(theta0, 0.0);
    const double e0 = env.energy();
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      env.step(scalar(0.0));
      worst = std::max(worst, std::abs(env.energy() - e0) / e0);
    }
    EXPECT_LT(worst, 0.01) << "theta0 = " << theta0;
  }
}

TEST(Pendulum, EpisodeEndsAtTimeLimit) {
  Pendulum env;
  env.reset(1);
  int steps = 0;
  envs::StepResult r;
  do {
    r = env.step(scalar(0.3));
    ++steps;
    EXPECT_FALSE(r.terminal);
  } while (!r.done);
  EXPECT_EQ(steps, 200);
  EXPECT_THROW(env.step(scalar(0.0)), StateError);
}

TEST(Pendulum, ObservationNoiseHasConfiguredScale) {
  Pendulum env;  // noise 0.01
  env.reset(11);
  double sum = 0.0, sum_sq = 0.0;
  int n = 0;
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> torque(-2.0, 2.0);
  while (n < 10000) {
    auto r = env.step(scalar(torque(rng)));
    const Eigen::VectorXd diff = r.observation - env.true_observation();
    for (Eigen::Index i = 0; i < diff.size() && n < 10000; ++i, ++n) {
      sum += diff(i);
      sum_sq += diff(i) * diff(i);
    }
    if (r.done) env.reset(static_cast<std::uint64_t>(n));
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  EXPECT_NEAR(sd, 0.01, 0.01 * 0.05);
}

TEST(Pendulum, DeterministicTrajectories) {
  Pendulum a, b;
  a.reset(5);
  b.reset(5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> torque(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const auto u = scalar(torque(rng));
    const auto ra = a.step(u), rb = b.step(u);
    ASSERT_EQ(ra.observation, rb.observation);
    ASSERT_EQ(ra.reward, rb.reward);
    ASSERT_EQ(a.theta(), b.theta());
  }
}

TEST(Pendulum, TrueStateDoesNotDependOnNoiseScale) {
  Pendulum::Params quiet = noiseless_pendulum();
  Pendulum::Params loud;
  loud.noise = 0.5;
  Pendulum a(quiet), b(loud);
  a.reset(4);
  b.reset(4);
  for (int k = 0; k < 100; ++k) {
    a.step(scalar(1.0));
    b.step(scalar(1.0));
    ASSERT_EQ(a.theta(), b.theta());
    ASSERT_EQ(a.theta_dot(), b.theta_dot());
  }
}

TEST(Pendulum, FuzzNoNaN) {
  Pendulum env;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> torque(-2.0, 2.0);
  for (int ep = 0; ep < 50; ++ep) {
    env.reset(static_cast<std::uint64_t>(ep));
    bool done = false;
    while (!done) {
      const auto r = env.step(scalar(torque(rng)));
      ASSERT_TRUE(r.observation.allFinite());
      ASSERT_TRUE(std::isfinite(r.reward));
      ASSERT_LE(r.reward, 1.0);
      ASSERT_GE(r.reward, -1.0 - env.params().action_cost * 4.0);
      done = r.done;
    }
  }
}

TEST(PointReacher, ZeroDistanceRewardIsActionCost) {
  PointReacher::Params p;
  p.noise = 0.0;
  PointReacher env(p);
  env.reset(0);
  env.set_state(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero());
  Eigen::VectorXd a(2);
  a << 0.5, -0.4;
  EXPECT_NEAR(env.step(a).reward, -p.action_cost * 0.41, 1e-15);
}

TEST(PointReacher, CaptureIsTerminal) {
  PointReacher::Params p;
  p.noise = 0.0;
  PointReacher env(p);
  env.reset(0);
  env.set_state(Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d::Zero(), Eigen::Vector2d(0.51, 0.5));
  const auto r = env.step(Eigen::VectorXd::Zero(2));
  EXPECT_TRUE(r.terminal);
  EXPECT_TRUE(r.done);
}

TEST(PointReacher, FuzzNoNaNAndStaysInArena) {
  PointReacher env;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> act(-1.0, 1.0);
  for (int ep = 0; ep < 50; ++ep) {
    env.reset(static_cast<std::uint64_t>(ep));
    bool done = false;
    while (!done) {
      Eigen::VectorXd a(2);
      a << act(rng), act(rng);
      const auto r = env.step(a);
      ASSERT_TRUE(r.observation.allFinite());
      ASSERT_TRUE(std::isfinite(r.reward));
      ASSERT_LE(env.position().cwiseAbs().maxCoeff(), 1.0);
      done = r.done;
    }
  }
}

TEST(PointReacher, RejectsWrongActionDimension) {
  PointReacher env;
  env.reset(0);
  EXPECT_THROW(env.step(Eigen::VectorXd::Zero(1)), DimensionError);
}

}  // namespace
