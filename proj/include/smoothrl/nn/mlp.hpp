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

#ifndef SMOOTHRL_NN_MLP_HPP
#define SMOOTHRL_NN_MLP_HPP

#include <atomic>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "smoothrl/errors.hpp"
#include "smoothrl/nn/layer_norm.hpp"
#include "smoothrl/nn/squish.hpp"

namespace smoothrl::nn {

enum class Activation : std::uint32_t { kSquish = 1 };

/// Layer widths of a fully connected network. Every hidden layer is
/// Linear -> LayerNorm -> Squish; the output layer is linear.
struct Architecture {
  Eigen::Index input = 0;
  std::vector<Eigen::Index> hidden{100, 100};
  Eigen::Index output = 0;

  [[nodiscard]] std::vector<Eigen::Index> widths() const {
    std::vector<Eigen::Index> w{input};
    w.insert(w.end(), hidden.begin(), hidden.end());
    w.push_back(output);
    return w;
  }
  bool operator==(const Architecture&) const = default;
};

class MlpNetwork;

/// One gradient array per parameter array of a network, same shapes.
struct GradientSet {
  std::vector<Eigen::MatrixXd> arrays;

  static GradientSet zeros_like(const MlpNetwork& net);

  void set_zero() {
    for (auto& a : arrays) a.setZero();
  }
  [[nodiscard]] bool all_finite() const {
    for (const auto& a : arrays) {
      if (!a.allFinite()) return false;
    }
    return true;
  }
  GradientSet& operator+=(const GradientSet& other) {
    if (other.arrays.size() != arrays.size()) throw DimensionError("GradientSet: size mismatch");
    for (std::size_t i = 0; i < arrays.size(); ++i) arrays[i] += other.arrays[i];
    return *this;
  }
};

/// Activations recorded by a forward pass; consumed by MlpNetwork::backward.
struct Tape {
  struct Hidden {
    Eigen::MatrixXd normalized;  // layer-norm x-hat
    Eigen::RowVectorXd inv_std;
    Eigen::MatrixXd pre;         // layer-norm output, input of squish
    Eigen::MatrixXd act;         // squish output
  };
  std::uint64_t network_id = 0;
  std::uint64_t version = 0;
  Eigen::MatrixXd input;  // features x batch
  std::vector<Hidden> hidden;
  Eigen::MatrixXd output;
};

/// Fully connected network with layer normalization and Squish activations.
///
/// Parameter arrays are kept in declaration order
///   dense0.weight, dense0.bias, norm0.gain, norm0.bias, dense1.weight, ...,
///   out.weight, out.bias
/// and biases/gains are stored as (n x 1) matrices so every array can be
/// treated uniformly by optimizers, soft updates and checkpoints.
///
/// Every mutation bumps version(); a Tape recorded before the mutation is
/// rejected by backward().
class MlpNetwork {
 public:
  MlpNetwork() : id_(next_id()) {}

  /// Uniform fan-in initialization; output layer weights are further scaled by
  /// `output_scale`. Layer-norm gains start at 1, all biases at 0.
  MlpNetwork(Architecture arch, std::mt19937_64& rng, double output_scale = 1.0)
      : arch_(std::move(arch)), id_(next_id()) {
    validate_architecture(arch_);
    allocate();
    const auto w = arch_.widths();
    const std::size_t n_hidden = arch_.hidden.size();
    for (std::size_t l = 0; l <= n_hidden; ++l) {
      const double limit = 1.0 / std::sqrt(static_cast<double>(w[l]));
      std::uniform_real_distribution<double> dist(-limit, limit);
      Eigen::MatrixXd& weight = params_[weight_index(l)];
      // Row-major fill so initial values do not depend on Eigen storage order.
      for (Eigen::Index r = 0; r < weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < weight.cols(); ++c) weight(r, c) = dist(rng);
      }
      if (l == n_hidden) weight *= output_scale;
    }
  }

  MlpNetwork(const MlpNetwork& other)
      : arch_(other.arch_), names_(other.names_), params_(other.params_), id_(next_id()) {}
  MlpNetwork& operator=(const MlpNetwork& other) {
    if (this != &other) {
      arch_ = other.arch_;
      names_ = other.names_;
      params_ = other.params_;
      ++version_;
    }
    return *this;
  }
  MlpNetwork(MlpNetwork&&) noexcept = default;
  MlpNetwork& operator=(MlpNetwork&&) noexcept = default;

  /// Builds a network from explicit arrays (checkpoint loading).
  static MlpNetwork from_arrays(Architecture arch, std::vector<Eigen::MatrixXd> arrays) {
    MlpNetwork net;
    validate_architecture(arch);
    net.arch_ = std::move(arch);
    net.allocate();
    if (arrays.size() != net.params_.size()) {
      throw DimensionError("MlpNetwork: wrong number of parameter arrays");
    }
    for (std::size_t i = 0; i < arrays.size(); ++i) {
      if (arrays[i].rows() != net.params_[i].rows() || arrays[i].cols() != net.params_[i].cols()) {
        throw DimensionError("MlpNetwork: array '" + net.names_[i] + "' has the wrong shape");
      }
      if (!arrays[i].allFinite()) {
        throw NumericalError("MlpNetwork: array '" + net.names_[i] + "' is not finite");
      }
      net.params_[i] = std::move(arrays[i]);
    }
    return net;
  }

  [[nodiscard]] const Architecture& architecture() const { return arch_; }
  [[nodiscard]] Eigen::Index input_dim() const { return arch_.input; }
  [[nodiscard]] Eigen::Index output_dim() const { return arch_.output; }
  [[nodiscard]] static constexpr Activation activation() { return Activation::kSquish; }

  [[nodiscard]] std::size_t num_arrays() const { return params_.size(); }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& arrays() const { return params_; }
  [[nodiscard]] const Eigen::MatrixXd& array(std::size_t i) const { return params_.at(i); }
  Eigen::MatrixXd& mutable_array(std::size_t i) {
    ++version_;
    return params_.at(i);
  }
  /// Marks parameters as changed after in-place edits through mutable_arrays().
  std::vector<Eigen::MatrixXd>& mutable_arrays() {
    ++version_;
    return params_;
  }

  [[nodiscard]] std::size_t num_parameters() const {
    std::size_t n = 0;
    for (const auto& a : params_) n += static_cast<std::size_t>(a.size());
    return n;
  }
  [[nodiscard]] bool all_finite() const {
    for (const auto& a : params_) {
      if (!a.allFinite()) return false;
    }
    return true;
  }

  [[nodiscard]] std::uint64_t id() const { return id_; }
  [[nodiscard]] std::uint64_t version() const { return version_; }

  /// Batched forward pass over the columns of `input` (features x batch).
  [[nodiscard]] Tape forward(const Eigen::MatrixXd& input) const {
    if (input.rows() != arch_.input) {
      throw DimensionError("MlpNetwork::forward: expected input dim " + std::to_string(arch_.input) +
                           ", got " + std::to_string(input.rows()));
    }
    Tape tape;
    tape.network_id = id_;
    tape.version = version_;
    tape.input = input;
    tape.hidden.resize(arch_.hidden.size());
    const Eigen::MatrixXd* x = &tape.input;
    for (std::size_t l = 0; l < arch_.hidden.size(); ++l) {
      Eigen::MatrixXd z = params_[weight_index(l)] * (*x);
      z.colwise() += params_[weight_index(l) + 1].col(0);
      auto& h = tape.hidden[l];
      layer_norm_columns(z, params_[weight_index(l) + 2].col(0), params_[weight_index(l) + 3].col(0),
                         h.normalized, h.inv_std, h.pre);
      h.act = h.pre.unaryExpr([](double v) { return squish(v); });
      x = &h.act;
    }
    const std::size_t out = weight_index(arch_.hidden.size());
    tape.output = params_[out] * (*x);
    tape.output.colwise() += params_[out + 1].col(0);
    return tape;
  }

  [[nodiscard]] Eigen::VectorXd forward(const Eigen::VectorXd& input) const {
    return forward(Eigen::MatrixXd(input)).output.col(0);
  }

  /// Reverse-mode pass: accumulates d(sum(output .* grad_output))/d(params)
  /// into `grads` and returns the gradient w.r.t. the tape's input.
  Eigen::MatrixXd backward(const Tape& tape, const Eigen::MatrixXd& grad_output,
                           GradientSet& grads) const {
    if (tape.network_id != id_ || tape.version != version_) {
      throw StateError("MlpNetwork::backward: tape does not belong to the current parameters");
    }
    if (grad_output.rows() != tape.output.rows() || grad_output.cols() != tape.output.cols()) {
      throw DimensionError("MlpNetwork::backward: output gradient shape mismatch");
    }
    if (grads.arrays.size() != params_.size()) {
      throw DimensionError("MlpNetwork::backward: gradient set does not match network");
    }
    const std::size_t n_hidden = arch_.hidden.size();
    const std::size_t out = weight_index(n_hidden);
    const Eigen::MatrixXd& last = n_hidden == 0 ? tape.input : tape.hidden.back().act;
    grads.arrays[out].noalias() += grad_output * last.transpose();
    grads.arrays[out + 1].col(0) += grad_output.rowwise().sum();
    Eigen::MatrixXd g = params_[out].transpose() * grad_output;
    for (std::size_t l = n_hidden; l-- > 0;) {
      const auto& h = tape.hidden[l];
      g.array() *= h.pre.unaryExpr([](double v) { return squish_derivative(v); }).array();
      const std::size_t w = weight_index(l);
      Eigen::MatrixXd dz = layer_norm_columns_backward(g, h.normalized, h.inv_std,
                                                       params_[w + 2].col(0), grads.arrays[w + 2],
                                                       grads.arrays[w + 3]);
      const Eigen::MatrixXd& x = l == 0 ? tape.input : tape.hidden[l - 1].act;
      grads.arrays[w].noalias() += dz * x.transpose();
      grads.arrays[w + 1].col(0) += dz.rowwise().sum();
      g = params_[w].transpose() * dz;
    }
    return g;
  }

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  static void validate_architecture(const Architecture& arch) {
    if (arch.input < 1 || arch.output < 1) throw DimensionError("MlpNetwork: empty input or output");
    for (auto h : arch.hidden) {
      if (h < 2) throw DimensionError("MlpNetwork: hidden widths must be >= 2 for layer norm");
    }
  }

  static std::size_t weight_index(std::size_t layer) { return 4 * layer; }

  void allocate() {
    const auto w = arch_.widths();
    params_.clear();
    names_.clear();
    for (std::size_t l = 0; l < arch_.hidden.size(); ++l) {
      const auto tag = std::to_string(l);
      names_.push_back("dense" + tag + ".weight");
      params_.push_back(Eigen::MatrixXd::Zero(w[l + 1], w[l]));
      names_.push_back("dense" + tag + ".bias");
      params_.push_back(Eigen::MatrixXd::Zero(w[l + 1], 1));
      names_.push_back("norm" + tag + ".gain");
      params_.push_back(Eigen::MatrixXd::Ones(w[l + 1], 1));
      names_.push_back("norm" + tag + ".bias");
      params_.push_back(Eigen::MatrixXd::Zero(w[l + 1], 1));
    }
    const std::size_t n = arch_.hidden.size();
    names_.push_back("out.weight");
    params_.push_back(Eigen::MatrixXd::Zero(w[n + 1], w[n]));
    names_.push_back("out.bias");
    params_.push_back(Eigen::MatrixXd::Zero(w[n + 1], 1));
  }

  Architecture arch_;
  std::vector<std::string> names_;
  std::vector<Eigen::MatrixXd> params_;
  std::uint64_t id_ = 0;
  std::uint64_t version_ = 0;
};

inline GradientSet GradientSet::zeros_like(const MlpNetwork& net) {
  GradientSet g;
  g.arrays.reserve(net.num_arrays());
  for (const auto& a : net.arrays()) g.arrays.push_back(Eigen::MatrixXd::Zero(a.rows(), a.cols()));
  return g;
}

/// Polyak averaging: target <- (1 - tau) * target + tau * online.
inline void soft_update(MlpNetwork& target, const MlpNetwork& online, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("soft_update: tau must lie in (0, 1]");
  if (target.architecture() != online.architecture()) {
    throw DimensionError("soft_update: target and online networks differ in shape");
  }
  auto& dst = target.mutable_arrays();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (tau == 1.0) {
      dst[i] = online.array(i);
    } else {
      dst[i] = (1.0 - tau) * dst[i] + tau * online.array(i);
    }
  }
}

}  // namespace smoothrl::nn

#endif  // SMOOTHRL_NN_MLP_HPP
