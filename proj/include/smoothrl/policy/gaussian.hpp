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

#ifndef SMOOTHRL_POLICY_GAUSSIAN_HPP
#define SMOOTHRL_POLICY_GAUSSIAN_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "smoothrl/errors.hpp"

namespace smoothrl::policy {

inline constexpr double kMinStd = 1e-3;
inline constexpr double kMaxStd = 1.5;

/// Diagonal normal action distribution.
struct GaussianPolicyOutput {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;

  [[nodiscard]] Eigen::Index dim() const { return mean.size(); }
};

struct ActionSample {
  Eigen::VectorXd action;
  double log_density = 0.0;
};

/// Gradient of a scalar w.r.t. the distribution parameters.
struct DistributionGrad {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

namespace detail {
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace detail

/// Maps a raw network output [mean head | std head] to distribution parameters.
///
/// mean = bound * tanh(mean head). std = kMinStd + (kMaxStd - kMinStd) *
/// sigmoid(std head), a smooth positive map confined to [kMinStd, kMaxStd]
/// whose gradient never vanishes exactly.
inline GaussianPolicyOutput map_net_output(const Eigen::VectorXd& raw,
                                           const Eigen::VectorXd& bounds) {
  const Eigen::Index n = bounds.size();
  if (raw.size() != 2 * n) {
    throw DimensionError("map_net_output: raw output must have twice the action dimension");
  }
  GaussianPolicyOutput p;
  p.mean = bounds.array() * raw.head(n).array().tanh();
  p.std = raw.tail(n).unaryExpr(
      [](double v) { return kMinStd + (kMaxStd - kMinStd) * detail::sigmoid(v); });
  return p;
}

/// Chain rule through map_net_output: d/d(raw) from d/d(mean), d/d(std).
inline Eigen::VectorXd map_net_output_backward(const Eigen::VectorXd& raw,
                                               const Eigen::VectorXd& bounds,
                                               const DistributionGrad& grad) {
  const Eigen::Index n = bounds.size();
  Eigen::VectorXd out(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = std::tanh(raw(i));
    out(i) = grad.mean(i) * bounds(i) * (1.0 - t * t);
    const double s = detail::sigmoid(raw(n + i));
    out(n + i) = grad.std(i) * (kMaxStd - kMinStd) * s * (1.0 - s);
  }
  return out;
}

/// Exact log-density of a diagonal Gaussian.
inline double log_prob(const GaussianPolicyOutput& p, const Eigen::VectorXd& a) {
  if (a.size() != p.dim()) throw DimensionError("log_prob: action dimension mismatch");
  const Eigen::ArrayXd z = (a - p.mean).array() / p.std.array();
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  return -0.5 * z.square().sum() - p.std.array().log().sum() -
         kHalfLog2Pi * static_cast<double>(p.dim());
}

inline DistributionGrad log_prob_grad(const GaussianPolicyOutput& p, const Eigen::VectorXd& a) {
  const Eigen::ArrayXd diff = (a - p.mean).array();
  const Eigen::ArrayXd var = p.std.array().square();
  DistributionGrad g;
  g.mean = (diff / var).matrix();
  g.std = (diff.square() / (var * p.std.array()) - 1.0 / p.std.array()).matrix();
  return g;
}

template <typename Rng>
ActionSample sample(const GaussianPolicyOutput& p, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ActionSample s;
  s.action.resize(p.dim());
  for (Eigen::Index i = 0; i < p.dim(); ++i) s.action(i) = p.mean(i) + p.std(i) * normal(rng);
  s.log_density = log_prob(p, s.action);
  return s;
}

/// Log of the Bhattacharyya coefficient between two diagonal Gaussians.
inline double log_bhattacharyya(const GaussianPolicyOutput& p1, const GaussianPolicyOutput& p2) {
  if (p1.dim() != p2.dim()) throw DimensionError("hellinger_sq: dimension mismatch");
  const Eigen::ArrayXd s1 = p1.std.array();
  const Eigen::ArrayXd s2 = p2.std.array();
  const Eigen::ArrayXd sum_var = s1.square() + s2.square();
  const Eigen::ArrayXd dmu = (p1.mean - p2.mean).array();
  return 0.5 * ((2.0 * s1 * s2) / sum_var).log().sum() - 0.25 * (dmu.square() / sum_var).sum();
}

/// Squared Hellinger distance 1/2 * int (sqrt(p1) - sqrt(p2))^2 da in closed form.
inline double hellinger_sq(const GaussianPolicyOutput& p1, const GaussianPolicyOutput& p2) {
  // 1 - exp(x) via expm1 keeps precision for nearly identical distributions.
  const double h = -std::expm1(log_bhattacharyya(p1, p2));
  return std::clamp(h, 0.0, 1.0);
}

struct HellingerGrad {
  DistributionGrad first;
  DistributionGrad second;
};

inline HellingerGrad hellinger_sq_grad(const GaussianPolicyOutput& p1,
                                       const GaussianPolicyOutput& p2) {
  const double bc = std::exp(log_bhattacharyya(p1, p2));
  const Eigen::ArrayXd s1 = p1.std.array();
  const Eigen::ArrayXd s2 = p2.std.array();
  const Eigen::ArrayXd sum_var = s1.square() + s2.square();
  const Eigen::ArrayXd dmu = (p1.mean - p2.mean).array();
  const Eigen::ArrayXd sq = dmu.square() / (2.0 * sum_var.square());
  // d(log bc)/d(.) terms, then dH = -bc * d(log bc).
  HellingerGrad g;
  g.first.mean = (bc * 0.5 * dmu / sum_var).matrix();
  g.second.mean = -g.first.mean;
  g.first.std = (-bc * (0.5 / s1 - s1 / sum_var + s1 * sq)).matrix();
  g.second.std = (-bc * (0.5 / s2 - s2 / sum_var + s2 * sq)).matrix();
  return g;
}

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Importance-sampled estimate of the squared Hellinger distance,
/// 1 - E_q[sqrt(p1 p2) / q]. The proposal is the defensive mixture
/// q = (p1 + p2 + r) / 3, where r is centred where the two densities overlap
/// and is wider than sqrt(p1 p2), so the importance weights stay bounded even
/// for far-apart pairs.
template <typename Rng>
MonteCarloEstimate hellinger_sq_mc(const GaussianPolicyOutput& p1, const GaussianPolicyOutput& p2,
                                   std::size_t n, Rng& rng) {
  if (n == 0) throw ConfigError("hellinger_sq_mc: need at least one sample");
  if (p1.dim() != p2.dim()) throw DimensionError("hellinger_sq_mc: dimension mismatch");
  const Eigen::ArrayXd v1 = p1.std.array().square();
  const Eigen::ArrayXd v2 = p2.std.array().square();
  GaussianPolicyOutput r;
  r.mean = ((v2 * p1.mean.array() + v1 * p2.mean.array()) / (v1 + v2)).matrix();
  r.std = ((v1 + v2) / 2.0).sqrt().matrix();
  std::uniform_int_distribution<int> pick(0, 2);
  // Welford running mean and squared deviations
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const int c = pick(rng);
    const ActionSample draw = c == 0 ? sample(p1, rng) : c == 1 ? sample(p2, rng) : sample(r, rng);
    const double l1 = log_prob(p1, draw.action);
    const double l2 = log_prob(p2, draw.action);
    const double l3 = log_prob(r, draw.action);
    const double hi = std::max({l1, l2, l3});
    const double log_q =
        hi + std::log(std::exp(l1 - hi) + std::exp(l2 - hi) + std::exp(l3 - hi)) - std::log(3.0);
    const double f = -std::expm1(0.5 * (l1 + l2) - log_q);
    const double delta = f - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (f - mean);
  }
  const double dn = static_cast<double>(n);
  MonteCarloEstimate est;
  est.value = mean;
  if (n > 1) est.std_error = std::sqrt(m2 / (dn - 1.0) / dn);
  return est;
}

}  // namespace smoothrl::policy

#endif  // SMOOTHRL_POLICY_GAUSSIAN_HPP
