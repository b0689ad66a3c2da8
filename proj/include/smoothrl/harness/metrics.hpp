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

#ifndef SMOOTHRL_HARNESS_METRICS_HPP
#define SMOOTHRL_HARNESS_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "smoothrl/errors.hpp"

namespace smoothrl::harness {

/// Mean over t of |mu_t - mu_{t+1}|_2 for one episode's mean actions.
/// Smaller is smoother.
inline double smoothness_metric(const std::vector<Eigen::VectorXd>& means) {
  if (means.size() < 2) throw ConfigError("smoothness_metric: need at least two actions");
  double sum = 0.0;
  for (std::size_t t = 0; t + 1 < means.size(); ++t) sum += (means[t] - means[t + 1]).norm();
  return sum / static_cast<double>(means.size() - 1);
}

/// Linear-interpolation quantile (the usual "type 7" definition).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ConfigError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

inline double iqr(const std::vector<double>& values) {
  return quantile(values, 0.75) - quantile(values, 0.25);
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
};

inline MeanStd mean_std(const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("mean_std of an empty sample");
  MeanStd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace smoothrl::harness

#endif  // SMOOTHRL_HARNESS_METRICS_HPP
