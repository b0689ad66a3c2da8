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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "smoothrl/errors.hpp"
#include "smoothrl/policy/gaussian.hpp"
#include "test_support.hpp"

namespace {

using namespace smoothrl;
using policy::GaussianPolicyOutput;
using smoothrl::testing::random_vector;

GaussianPolicyOutput dist(std::initializer_list<double> mean, std::initializer_list<double> std) {
  GaussianPolicyOutput p;
  p.mean = Eigen::Map<const Eigen::VectorXd>(mean.begin(), static_cast<Eigen::Index>(mean.size()));
  p.std = Eigen::Map<const Eigen::VectorXd>(std.begin(), static_cast<Eigen::Index>(std.size()));
  return p;
}

GaussianPolicyOutput random_dist(std::mt19937_64& rng, Eigen::Index dim) {
  std::uniform_real_distribution<double> s(0.2, 1.5);
  GaussianPolicyOutput p;
  p.mean = random_vector(rng, dim);
  p.std.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) p.std(i) = s(rng);
  return p;
}

TEST(MapNetOutput, ZeroRawIsCentered) {
  Eigen::VectorXd bounds(2);
  bounds << 2.0, 0.5;
  const auto p = policy::map_net_output(Eigen::VectorXd::Zero(4), bounds);
  EXPECT_EQ(p.mean, Eigen::VectorXd::Zero(2));
  const double s0 = p.std(0);
  EXPECT_EQ(p.std(1), s0);
  EXPECT_GE(s0, policy::kMinStd);
  EXPECT_LE(s0, policy::kMaxStd);
}

TEST(MapNetOutput, SaturatesAtActionBound) {
  Eigen::VectorXd bounds(1);
  bounds << 2.0;
  Eigen::VectorXd raw(2);
  raw << 40.0, 0.0;
  EXPECT_NEAR(policy::map_net_output(raw, bounds).mean(0), 2.0, 1e-12);
  raw(0) = -40.0;
  EXPECT_NEAR(policy::map_net_output(raw, bounds).mean(0), -2.0, 1e-12);
}

TEST(MapNetOutput, StdFuzzStaysInBounds) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> wide(0.0, 30.0);
  Eigen::VectorXd bounds = Eigen::VectorXd::Ones(1);
  double lo = 1e9, hi = -1e9;
  for (int k = 0; k < 10000; ++k) {
    Eigen::VectorXd raw(2);
    raw << wide(rng), wide(rng);
    const auto p = policy::map_net_output(raw, bounds);
    ASSERT_TRUE(p.std.allFinite());
    lo = std::min(lo, p.std(0));
    hi = std::max(hi, p.std(0));
  }
  EXPECT_GE(lo, policy::kMinStd);
  EXPECT_LE(hi, policy::kMaxStd);
  // the range is reachable at both ends
  EXPECT_LT(lo, 1.01 * policy::kMinStd);
  EXPECT_GT(hi, 0.99 * policy::kMaxStd);
}

TEST(MapNetOutput, RejectsWrongRawSize) {
  EXPECT_THROW(policy::map_net_output(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(2)), DimensionError);
}

TEST(MapNetOutput, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  Eigen::VectorXd bounds(3);
  bounds << 2.0, 1.0, 0.5;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd raw = random_vector(rng, 6, 2.0);
    const Eigen::VectorXd wm = random_vector(rng, 3), ws = random_vector(rng, 3);
    auto f = [&](const Eigen::VectorXd& r) {
      const auto p = policy::map_net_output(r, bounds);
      return wm.dot(p.mean) + ws.dot(p.std);
    };
    const Eigen::VectorXd analytic = policy::map_net_output_backward(raw, bounds, {wm, ws});
    Eigen::VectorXd numeric(6);
    for (int k = 0; k < 6; ++k) {
      Eigen::VectorXd rp = raw, rm = raw;
      rp(k) += 1e-6;
      rm(k) -= 1e-6;
      numeric(k) = (f(rp) - f(rm)) / 2e-6;
    }
    EXPECT_LT(smoothrl::testing::relative_error(analytic, numeric), 1e-6);
  }
}

TEST(LogProb, StandardNormalAtZero) {
  const auto p = dist({0.0}, {1.0});
  EXPECT_NEAR(policy::log_prob(p, Eigen::VectorXd::Zero(1)), -0.5 * std::log(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(policy::log_prob(p, Eigen::VectorXd::Zero(1)), -0.91894, 5e-6);
}

TEST(LogProb, IntegratesToOne) {
  for (const auto& p : {dist({0.3}, {0.7}), dist({-1.0}, {1e-2}), dist({0.0}, {1.5})}) {
    // composite Simpson over +-10 std
    const int n = 20000;
    const double a = p.mean(0) - 10 * p.std(0), b = p.mean(0) + 10 * p.std(0);
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      Eigen::VectorXd x(1);
      x << a + k * h;
      sum += w * std::exp(policy::log_prob(p, x));
    }
    EXPECT_NEAR(sum * h / 3.0, 1.0, 1e-6);
  }
}

TEST(LogProb, MaximizedAtMeanWithZeroMeanGradient) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_dist(rng, 3);
    const double at_mean = policy::log_prob(p, p.mean);
    for (int k = 0; k < 10; ++k) {
      EXPECT_LT(policy::log_prob(p, p.mean + random_vector(rng, 3, 0.1)), at_mean);
    }
    EXPECT_LT(policy::log_prob_grad(p, p.mean).mean.cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(LogProb, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_dist(rng, 3);
    const Eigen::VectorXd a = p.mean + random_vector(rng, 3);
    const auto g = policy::log_prob_grad(p, a);
    for (int i = 0; i < 3; ++i) {
      auto pp = p, pm = p;
      pp.mean(i) += 1e-6;
      pm.mean(i) -= 1e-6;
      EXPECT_NEAR(g.mean(i), (policy::log_prob(pp, a) - policy::log_prob(pm, a)) / 2e-6, 1e-6);
      pp = p;
      pm = p;
      pp.std(i) += 1e-6;
      pm.std(i) -= 1e-6;
      EXPECT_NEAR(g.std(i), (policy::log_prob(pp, a) - policy::log_prob(pm, a)) / 2e-6, 1e-6);
    }
  }
}

TEST(Sample, LogDensityIsConsistent) {
  std::mt19937_64 rng(5);
  const auto p = random_dist(rng, 2);
  for (int k = 0; k < 100; ++k) {
    const auto s = policy::sample(p, rng);
    EXPECT_EQ(s.log_density, policy::log_prob(p, s.action));
  }
}

TEST(Sample, MinimumStdStaysNearMean) {
  std::mt19937_64 rng(6);
  const auto p = dist({0.4, -1.2}, {policy::kMinStd, policy::kMinStd});
  int outside = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    if ((policy::sample(p, rng).action - p.mean).cwiseAbs().maxCoeff() >= 1e-2) ++outside;
  }
  // |z| >= 10 has probability ~1.5e-23 per dimension.
  EXPECT_LT(static_cast<double>(outside) / n, 1e-3);
}

TEST(Sample, EmpiricalMeanWithinFourStandardErrors) {
  std::mt19937_64 rng(7);
  const auto p = dist({0.5, -0.25}, {0.8, 1.3});
  const int n = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
  for (int k = 0; k < n; ++k) sum += policy::sample(p, rng).action;
  const Eigen::VectorXd mean = sum / n;
  for (int i = 0; i < 2; ++i) EXPECT_LT(std::abs(mean(i) - p.mean(i)), 4.0 * p.std(i) / std::sqrt(n));
}

TEST(Sample, FixedSeedIsReproducible) {
  const auto p = dist({0.1}, {0.9});
  std::mt19937_64 r1(99), r2(99);
  EXPECT_EQ(policy::sample(p, r1).action, policy::sample(p, r2).action);
}

TEST(Hellinger, IdenticalIsZero) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_dist(rng, 4);
    EXPECT_LE(std::abs(policy::hellinger_sq(p, p)), 1e-12);
  }
}

TEST(Hellinger, UnitShiftOfTwo) {
  const double h = policy::hellinger_sq(dist({0.0}, {1.0}), dist({2.0}, {1.0}));
  EXPECT_NEAR(h, 1.0 - std::exp(-0.5), 1e-15);
  EXPECT_NEAR(h, 0.39347, 5e-6);
}

TEST(Hellinger, UnitShiftAgreesWithMonteCarlo) {
  std::mt19937_64 rng(9);
  const auto p1 = dist({0.0}, {1.0}), p2 = dist({2.0}, {1.0});
  const auto mc = policy::hellinger_sq_mc(p1, p2, 1000000, rng);
  EXPECT_LT(std::abs(mc.value - policy::hellinger_sq(p1, p2)), 3.0 * mc.std_error);
}

TEST(Hellinger, SymmetricAndBounded) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 100; ++t) {
    const auto p1 = random_dist(rng, 3), p2 = random_dist(rng, 3);
    const double a = policy::hellinger_sq(p1, p2);
    EXPECT_EQ(a, policy::hellinger_sq(p2, p1));
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
  // far apart distributions saturate at 1 without leaving the range
  const double far = policy::hellinger_sq(dist({-1e3}, {1e-3}), dist({1e3}, {1e-3}));
  EXPECT_EQ(far, 1.0);
}

TEST(Hellinger, PositiveWhenParametersDiffer) {
  const auto p = dist({0.0, 0.0}, {1.0, 1.0});
  auto q = p;
  q.mean(1) = 1e-3;
  EXPECT_GT(policy::hellinger_sq(p, q), 0.0);
  q = p;
  q.std(0) = 1.001;
  EXPECT_GT(policy::hellinger_sq(p, q), 0.0);
}

TEST(Hellinger, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto p1 = random_dist(rng, 3);
    auto p2 = random_dist(rng, 3);
    p2.mean = p1.mean + random_vector(rng, 3, 0.5);
    const auto g = policy::hellinger_sq_grad(p1, p2);
    Eigen::VectorXd analytic(12), numeric(12);
    analytic << g.first.mean, g.first.std, g.second.mean, g.second.std;
    for (int k = 0; k < 12; ++k) {
      auto a = p1, b = p2, am = p1, bm = p2;
      auto& target_p = k < 6 ? a : b;
      auto& target_m = k < 6 ? am : bm;
      const int i = k % 3;
      const bool is_std = (k % 6) >= 3;
      (is_std ? target_p.std : target_p.mean)(i) += 1e-6;
      (is_std ? target_m.std : target_m.mean)(i) -= 1e-6;
      numeric(k) = (policy::hellinger_sq(a, b) - policy::hellinger_sq(am, bm)) / 2e-6;
    }
    EXPECT_LT(smoothrl::testing::relative_error(analytic, numeric), 1e-4);
  }
}

TEST(HellingerMonteCarlo, IdenticalIsNearZero) {
  std::mt19937_64 rng(12);
  const auto p = dist({0.2, -0.3}, {0.5, 1.1});
  EXPECT_LT(std::abs(policy::hellinger_sq_mc(p, p, 100000, rng).value), 1e-3);
}

TEST(HellingerMonteCarlo, SingleSampleIsFinite) {
  std::mt19937_64 rng(13);
  const auto mc = policy::hellinger_sq_mc(dist({0.0}, {1.0}), dist({1.0}, {0.5}), 1, rng);
  EXPECT_TRUE(std::isfinite(mc.value));
  EXPECT_THROW(policy::hellinger_sq_mc(dist({0.0}, {1.0}), dist({1.0}, {0.5}), 0, rng), ConfigError);
}

TEST(HellingerMonteCarlo, MatchesClosedFormOnRandomPairs) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int t = 0; t < 20; ++t) {
    const int d = dim(rng);
    const auto p1 = random_dist(rng, d), p2 = random_dist(rng, d);
    const auto mc = policy::hellinger_sq_mc(p1, p2, 100000, rng);
    EXPECT_LT(std::abs(mc.value - policy::hellinger_sq(p1, p2)), 3.0 * mc.std_error) << "pair " << t;
  }
}

}  // namespace
