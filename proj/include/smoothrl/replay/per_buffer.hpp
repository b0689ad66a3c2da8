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

#ifndef SMOOTHRL_REPLAY_PER_BUFFER_HPP
#define SMOOTHRL_REPLAY_PER_BUFFER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smoothrl/errors.hpp"

namespace smoothrl::replay {

struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  Eigen::VectorXd next_state;
  double reward = 0.0;
  /// True only for real terminal states; time-limit truncation keeps bootstrapping.
  bool done = false;
  /// Log-density of `action` under the behavior policy when it was collected.
  double behavior_log_density = 0.0;
};

struct PerConfig {
  std::size_t capacity = 10000;
  std::size_t batch_size = 32;
  double alpha = 1.0;
  double beta = 0.5;

  void validate() const {
    if (capacity < 1) throw ConfigError("per.capacity must be >= 1");
    if (batch_size < 1 || batch_size > capacity) {
      throw ConfigError("per.batch_size must lie in [1, per.capacity]");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("per.alpha must be >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("per.beta must be >= 0");
  }
};

inline constexpr double kPriorityFloor = 1e-6;

struct SampledBatch {
  std::vector<std::size_t> indices;
  std::vector<const Transition*> transitions;
  std::vector<double> weights;  // normalized so the batch maximum is 1

  [[nodiscard]] std::size_t size() const { return indices.size(); }
};

/// Proportional prioritized experience replay over a FIFO ring of slots.
///
/// Slot indices are stable: a slot keeps its index until its transition is
/// evicted, and the priority lives in the same slot.
class PerBuffer {
 public:
  explicit PerBuffer(PerConfig config = {}) : config_(config) {
    config_.validate();
    slots_.reserve(config_.capacity);
    priorities_.reserve(config_.capacity);
    scaled_.reserve(config_.capacity);
  }

  [[nodiscard]] const PerConfig& config() const { return config_; }
  [[nodiscard]] std::size_t size() const { return slots_.size(); }
  [[nodiscard]] std::size_t capacity() const { return config_.capacity; }
  [[nodiscard]] const Transition& at(std::size_t i) const { return slots_.at(i); }
  [[nodiscard]] double priority(std::size_t i) const { return priorities_.at(i); }
  [[nodiscard]] const std::vector<double>& priorities() const { return priorities_; }

  /// Largest priority currently stored, or 1 for an empty buffer.
  [[nodiscard]] double max_priority() const {
    if (priorities_.empty()) return 1.0;
    return *std::max_element(priorities_.begin(), priorities_.end());
  }

  /// Stores `t`, evicting the oldest transition at capacity. Without an
  /// explicit priority the transition gets the current max priority.
  std::size_t push(Transition t, std::optional<double> priority = std::nullopt) {
    const double p = priority.value_or(max_priority());
    if (!std::isfinite(p) || !(p > 0.0)) {
      throw ConfigError("PerBuffer::push: priority must be finite and > 0");
    }
    std::size_t slot;
    if (slots_.size() < config_.capacity) {
      slot = slots_.size();
      slots_.push_back(std::move(t));
      priorities_.push_back(p);
      scaled_.push_back(scale(p));
    } else {
      slot = next_;
      slots_[slot] = std::move(t);
      priorities_[slot] = p;
      scaled_[slot] = scale(p);
    }
    next_ = (slot + 1) % config_.capacity;
    return slot;
  }

  /// P(i) = p_i^alpha / sum_j p_j^alpha.
  [[nodiscard]] std::vector<double> probabilities() const {
    const double total = total_scaled();
    std::vector<double> out(scaled_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = scaled_[i] / total;
    return out;
  }

  /// w_i = (N P(i))^-beta divided by the largest w in `indices`.
  [[nodiscard]] std::vector<double> importance_weights(const std::vector<std::size_t>& indices) const {
    const double total = total_scaled();
    const double n = static_cast<double>(size());
    std::vector<double> w(indices.size());
    double max_w = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const double prob = scaled_.at(indices[k]) / total;
      w[k] = std::pow(n * prob, -config_.beta);
      max_w = std::max(max_w, w[k]);
    }
    for (auto& v : w) v /= max_w;
    return w;
  }

  /// Draws batch_size indices i.i.d. from P(i), with replacement.
  template <typename Rng>
  SampledBatch sample_batch(Rng& rng) const {
    if (size() < config_.batch_size) {
      throw StateError("PerBuffer::sample_batch: " + std::to_string(size()) +
                       " transitions stored, need " + std::to_string(config_.batch_size));
    }
    std::vector<double> cumulative(scaled_.size());
    double running = 0.0;
    for (std::size_t i = 0; i < scaled_.size(); ++i) {
      running += scaled_[i];
      cumulative[i] = running;
    }
    std::uniform_real_distribution<double> uniform(0.0, running);
    SampledBatch batch;
    batch.indices.reserve(config_.batch_size);
    for (std::size_t k = 0; k < config_.batch_size; ++k) {
      const double u = uniform(rng);
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      if (it == cumulative.end()) --it;
      batch.indices.push_back(static_cast<std::size_t>(it - cumulative.begin()));
    }
    for (auto i : batch.indices) batch.transitions.push_back(&slots_[i]);
    batch.weights = importance_weights(batch.indices);
    return batch;
  }

  /// p_i = |delta_i| + floor for every sampled index.
  void update_priorities(const std::vector<std::size_t>& indices, const std::vector<double>& td_errors) {
    if (indices.size() != td_errors.size()) {
      throw DimensionError("PerBuffer::update_priorities: indices and errors differ in length");
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (indices[k] >= size()) {
        throw std::out_of_range("PerBuffer::update_priorities: index " + std::to_string(indices[k]) +
                                " out of range");
      }
      if (!std::isfinite(td_errors[k])) {
        throw NumericalError("PerBuffer::update_priorities: non-finite TD error");
      }
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const double p = std::abs(td_errors[k]) + kPriorityFloor;
      priorities_[indices[k]] = p;
      scaled_[indices[k]] = scale(p);
    }
  }

 private:
  [[nodiscard]] double scale(double p) const { return config_.alpha == 1.0 ? p : std::pow(p, config_.alpha); }
  [[nodiscard]] double total_scaled() const {
    double total = 0.0;
    for (double v : scaled_) total += v;
    return total;
  }

  PerConfig config_;
  std::vector<Transition> slots_;
  std::vector<double> priorities_;
  std::vector<double> scaled_;  // priorities_ raised to alpha
  std::size_t next_ = 0;
};

}  // namespace smoothrl::replay

#endif  // SMOOTHRL_REPLAY_PER_BUFFER_HPP
