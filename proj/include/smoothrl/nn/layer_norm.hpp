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

#ifndef SMOOTHRL_NN_LAYER_NORM_HPP
#define SMOOTHRL_NN_LAYER_NORM_HPP

#include <Eigen/Dense>

#include "smoothrl/errors.hpp"

namespace smoothrl::nn {

inline constexpr double kLayerNormEpsilon = 1e-5;

/// Normalizes x to zero mean and unit (population) variance, then applies
/// gain and bias element-wise.
inline Eigen::VectorXd layer_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& gain,
                                  const Eigen::VectorXd& bias,
                                  double epsilon = kLayerNormEpsilon) {
  if (x.size() < 2 || gain.size() != x.size() || bias.size() != x.size()) {
    throw DimensionError("layer_norm: vectors must share a length >= 2");
  }
  const double mean = x.mean();
  const Eigen::ArrayXd centered = x.array() - mean;
  const double var = centered.square().mean();
  const double inv_std = 1.0 / std::sqrt(var + epsilon);
  return (gain.array() * centered * inv_std + bias.array()).matrix();
}

/// Column-wise layer normalization of a (features x batch) block. Fills
/// `normalized` and `inv_std` for the backward pass.
inline void layer_norm_columns(const Eigen::MatrixXd& x, const Eigen::VectorXd& gain,
                               const Eigen::VectorXd& bias, Eigen::MatrixXd& normalized,
                               Eigen::RowVectorXd& inv_std, Eigen::MatrixXd& out,
                               double epsilon = kLayerNormEpsilon) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  normalized = x.rowwise() - mean;
  const Eigen::RowVectorXd var = normalized.array().square().colwise().mean();
  inv_std = (var.array() + epsilon).rsqrt();
  normalized.array().rowwise() *= inv_std.array();
  out = (normalized.array().colwise() * gain.array()).colwise() + bias.array();
}

/// Backward of layer_norm_columns. `grad_out` is dL/d(out); returns dL/dx and
/// accumulates into the gain and bias gradients.
inline Eigen::MatrixXd layer_norm_columns_backward(const Eigen::MatrixXd& grad_out,
                                                   const Eigen::MatrixXd& normalized,
                                                   const Eigen::RowVectorXd& inv_std,
                                                   const Eigen::VectorXd& gain,
                                                   Eigen::MatrixXd& grad_gain,
                                                   Eigen::MatrixXd& grad_bias) {
  grad_gain.col(0) += (grad_out.array() * normalized.array()).rowwise().sum().matrix();
  grad_bias.col(0) += grad_out.rowwise().sum();
  const Eigen::MatrixXd g_hat = grad_out.array().colwise() * gain.array();
  const double n = static_cast<double>(grad_out.rows());
  const Eigen::RowVectorXd sum_g = g_hat.colwise().sum();
  const Eigen::RowVectorXd sum_gx = (g_hat.array() * normalized.array()).colwise().sum();
  Eigen::MatrixXd dx = g_hat * n;
  dx.rowwise() -= sum_g;
  dx.array() -= normalized.array().rowwise() * sum_gx.array();
  dx.array().rowwise() *= (inv_std.array() / n);
  return dx;
}

}  // namespace smoothrl::nn

#endif  // SMOOTHRL_NN_LAYER_NORM_HPP
