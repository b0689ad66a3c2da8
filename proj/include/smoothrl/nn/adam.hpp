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

#ifndef SMOOTHRL_NN_ADAM_HPP
#define SMOOTHRL_NN_ADAM_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "smoothrl/errors.hpp"
#include "smoothrl/nn/mlp.hpp"

namespace smoothrl::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adaptive-moment optimizer state for one network.
class Adam {
 public:
  Adam() = default;
  Adam(const MlpNetwork& net, AdamConfig config = {}) : config_(config) {
    if (!(config_.learning_rate > 0.0) || config_.beta1 < 0.0 || config_.beta1 >= 1.0 ||
        config_.beta2 < 0.0 || config_.beta2 >= 1.0 || !(config_.epsilon > 0.0)) {
      throw ConfigError("Adam: invalid hyperparameters");
    }
    first_ = GradientSet::zeros_like(net).arrays;
    second_ = first_;
  }

  /// Restores a previously saved state.
  Adam(AdamConfig config, std::uint64_t step, std::vector<Eigen::MatrixXd> first,
       std::vector<Eigen::MatrixXd> second)
      : config_(config), first_(std::move(first)), second_(std::move(second)), step_(step) {
    if (first_.size() != second_.size()) throw DimensionError("Adam: moment arrays disagree");
  }

  [[nodiscard]] const AdamConfig& config() const { return config_; }
  [[nodiscard]] std::uint64_t step_count() const { return step_; }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& first_moments() const { return first_; }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& second_moments() const { return second_; }

  void step(MlpNetwork& net, const GradientSet& grads) {
    if (grads.arrays.size() != net.num_arrays() || first_.size() != net.num_arrays()) {
      throw DimensionError("Adam::step: gradient set does not match network");
    }
    for (std::size_t i = 0; i < grads.arrays.size(); ++i) {
      if (grads.arrays[i].rows() != net.array(i).rows() ||
          grads.arrays[i].cols() != net.array(i).cols()) {
        throw DimensionError("Adam::step: gradient '" + net.names()[i] + "' has the wrong shape");
      }
    }
    if (!grads.all_finite()) throw NumericalError("Adam::step: non-finite gradient");

    ++step_;
    const double t = static_cast<double>(step_);
    const double bias1 = 1.0 - std::pow(config_.beta1, t);
    const double bias2 = 1.0 - std::pow(config_.beta2, t);
    const double step_size = config_.learning_rate / bias1;
    auto& params = net.mutable_arrays();
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto m = first_[i].array();
      auto v = second_[i].array();
      const auto g = grads.arrays[i].array();
      m = config_.beta1 * m + (1.0 - config_.beta1) * g;
      v = config_.beta2 * v + (1.0 - config_.beta2) * g.square();
      params[i].array() -= step_size * m / ((v / bias2).sqrt() + config_.epsilon);
    }
  }

 private:
  AdamConfig config_;
  std::vector<Eigen::MatrixXd> first_;
  std::vector<Eigen::MatrixXd> second_;
  std::uint64_t step_ = 0;
};

}  // namespace smoothrl::nn

#endif  // SMOOTHRL_NN_ADAM_HPP
