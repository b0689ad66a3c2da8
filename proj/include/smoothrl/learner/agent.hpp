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

#ifndef SMOOTHRL_LEARNER_AGENT_HPP
#define SMOOTHRL_LEARNER_AGENT_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smoothrl/envs/environment.hpp"
#include "smoothrl/errors.hpp"
#include "smoothrl/learner/config.hpp"
#include "smoothrl/learner/losses.hpp"
#include "smoothrl/learner/regularizers.hpp"
#include "smoothrl/nn/adam.hpp"
#include "smoothrl/nn/mlp.hpp"
#include "smoothrl/policy/gaussian.hpp"
#include "smoothrl/replay/per_buffer.hpp"

namespace smoothrl::learner {

/// Column-major view of a replayed minibatch (one column per transition).
struct TrainingBatch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::MatrixXd next_states;
  Eigen::VectorXd rewards;
  Eigen::VectorXd terminal;  // 1 for terminal transitions, else 0
  Eigen::VectorXd behavior_log_density;
  Eigen::VectorXd weights;
  std::vector<std::size_t> indices;

  [[nodiscard]] Eigen::Index size() const { return states.cols(); }

  static TrainingBatch from(const replay::SampledBatch& sampled) {
    TrainingBatch b;
    const auto n = static_cast<Eigen::Index>(sampled.size());
    if (n == 0) throw StateError("TrainingBatch: empty batch");
    const auto& first = *sampled.transitions.front();
    b.states.resize(first.state.size(), n);
    b.actions.resize(first.action.size(), n);
    b.next_states.resize(first.next_state.size(), n);
    b.rewards.resize(n);
    b.terminal.resize(n);
    b.behavior_log_density.resize(n);
    b.weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& t = *sampled.transitions[static_cast<std::size_t>(i)];
      b.states.col(i) = t.state;
      b.actions.col(i) = t.action;
      b.next_states.col(i) = t.next_state;
      b.rewards(i) = t.reward;
      b.terminal(i) = t.done ? 1.0 : 0.0;
      b.behavior_log_density(i) = t.behavior_log_density;
      b.weights(i) = sampled.weights[static_cast<std::size_t>(i)];
    }
    b.indices = sampled.indices;
    return b;
  }
};

/// Perturbed states fed to the regularizers, one column per transition.
struct RegularizerSamples {
  Eigen::MatrixXd l2c2_tilde;
  Eigen::MatrixXd caps_tilde;
};

/// Quantities that enter the objective as constants.
struct StopGradients {
  Eigen::VectorXd targets;       // y
  Eigen::VectorXd advantages;    // y - V(s)
  Eigen::VectorXd coefficients;  // clipped importance ratio (or 1)
};

struct LossMetrics {
  double value_loss = 0.0;
  double policy_loss = 0.0;
  double policy_reg = 0.0;
  double value_reg = 0.0;

  [[nodiscard]] double total() const { return value_loss + policy_loss + policy_reg + value_reg; }
};

struct Networks {
  nn::MlpNetwork policy;
  nn::MlpNetwork value;
  nn::MlpNetwork policy_target;
  nn::MlpNetwork value_target;
};

struct ObjectiveEvaluation {
  LossMetrics metrics;
  StopGradients stop;
  Eigen::VectorXd td_errors;
  nn::GradientSet policy_grad;
  nn::GradientSet value_grad;
};

namespace detail {

inline std::vector<policy::GaussianPolicyOutput> distributions(const Eigen::MatrixXd& raw,
                                                               const Eigen::VectorXd& bounds) {
  std::vector<policy::GaussianPolicyOutput> out;
  out.reserve(static_cast<std::size_t>(raw.cols()));
  for (Eigen::Index i = 0; i < raw.cols(); ++i) {
    out.push_back(policy::map_net_output(raw.col(i), bounds));
  }
  return out;
}

inline void add_raw_grad(Eigen::MatrixXd& grad_raw, Eigen::Index col, const Eigen::MatrixXd& raw,
                         const Eigen::VectorXd& bounds, const policy::DistributionGrad& g) {
  grad_raw.col(col) += policy::map_net_output_backward(raw.col(col), bounds, g);
}

}  // namespace detail

/// Evaluates the full per-mode objective
///   L_V + L_pi - eta sum(log std) (+ CAPS term | + lambda_pi C_pi + lambda_v C_V)
/// averaged over the batch, and optionally its gradients w.r.t. the online
/// policy and value parameters. When `frozen` is given, targets, advantages
/// and ratio coefficients are taken from it instead of being recomputed,
/// which makes the returned value the exact function the gradients describe.
inline ObjectiveEvaluation evaluate_objective(const Networks& nets, const Eigen::VectorXd& bounds,
                                              const AgentConfig& cfg, const TrainingBatch& batch,
                                              const RegularizerSamples& samples,
                                              const StopGradients* frozen = nullptr,
                                              bool with_gradients = true) {
  const Eigen::Index n = batch.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Eigen::Index heads = nets.value.output_dim();
  const Eigen::Index act_dim = bounds.size();
  ObjectiveEvaluation ev;

  // Value branch at s and TD targets from the target network at s'.
  const nn::Tape value_s = nets.value.forward(batch.states);
  const Eigen::RowVectorXd v_mean = value_s.output.colwise().mean();
  if (frozen) {
    ev.stop = *frozen;
  } else {
    const Eigen::MatrixXd v_next = nets.value_target.forward(batch.next_states).output;
    ev.stop.targets.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      ev.stop.targets(i) =
          td_target(batch.rewards(i), v_next.col(i).mean(), batch.terminal(i) > 0.5, cfg.gamma);
    }
    ev.stop.advantages = ev.stop.targets - v_mean.transpose();
  }
  ev.td_errors = ev.stop.targets - v_mean.transpose();

  Eigen::MatrixXd grad_value_s = Eigen::MatrixXd::Zero(heads, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ev.metrics.value_loss += inv_n * value_loss(ev.stop.targets(i), value_s.output.col(i), batch.weights(i));
    if (with_gradients) {
      grad_value_s.col(i) = inv_n * value_loss_grad(ev.stop.targets(i), value_s.output.col(i), batch.weights(i));
    }
  }

  // Policy branch at s.
  const nn::Tape policy_s = nets.policy.forward(batch.states);
  const auto pi_s = detail::distributions(policy_s.output, bounds);
  Eigen::MatrixXd grad_raw_s = Eigen::MatrixXd::Zero(2 * act_dim, n);
  if (!frozen) ev.stop.coefficients.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = pi_s[static_cast<std::size_t>(i)];
    const double lp = policy::log_prob(p, batch.actions.col(i));
    if (!frozen) {
      ev.stop.coefficients(i) = ratio_coefficient(lp, batch.behavior_log_density(i), cfg.clip_radius);
    }
    const PolicyLoss pl = policy_loss(ev.stop.advantages(i), lp, ev.stop.coefficients(i), batch.weights(i));
    ev.metrics.policy_loss += inv_n * (pl.value - cfg.entropy_coef * p.std.array().log().sum());
    if (with_gradients) {
      policy::DistributionGrad g = policy::log_prob_grad(p, batch.actions.col(i));
      g.mean *= inv_n * pl.grad_log_density;
      g.std *= inv_n * pl.grad_log_density;
      g.std -= inv_n * cfg.entropy_coef * p.std.cwiseInverse();
      detail::add_raw_grad(grad_raw_s, i, policy_s.output, bounds, g);
    }
  }

  if (with_gradients) {
    ev.policy_grad = nn::GradientSet::zeros_like(nets.policy);
    ev.value_grad = nn::GradientSet::zeros_like(nets.value);
  }

  if (cfg.mode == Mode::kCaps) {
    const nn::Tape policy_next = nets.policy.forward(batch.next_states);
    const nn::Tape policy_tilde = nets.policy.forward(samples.caps_tilde);
    const auto pi_next = detail::distributions(policy_next.output, bounds);
    const auto pi_tilde = detail::distributions(policy_tilde.output, bounds);
    Eigen::MatrixXd grad_raw_next = Eigen::MatrixXd::Zero(2 * act_dim, n);
    Eigen::MatrixXd grad_raw_tilde = Eigen::MatrixXd::Zero(2 * act_dim, n);
    const Eigen::VectorXd zero_std = Eigen::VectorXd::Zero(act_dim);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      ev.metrics.policy_reg += inv_n * caps_term(pi_s[k].mean, pi_next[k].mean, pi_tilde[k].mean, cfg.caps);
      if (with_gradients) {
        const CapsTermGrads g = caps_term_grad(pi_s[k].mean, pi_next[k].mean, pi_tilde[k].mean, cfg.caps);
        detail::add_raw_grad(grad_raw_s, i, policy_s.output, bounds, {inv_n * g.mu_s, zero_std});
        detail::add_raw_grad(grad_raw_next, i, policy_next.output, bounds, {inv_n * g.mu_next, zero_std});
        detail::add_raw_grad(grad_raw_tilde, i, policy_tilde.output, bounds, {inv_n * g.mu_tilde, zero_std});
      }
    }
    if (with_gradients) {
      nets.policy.backward(policy_next, grad_raw_next, ev.policy_grad);
      nets.policy.backward(policy_tilde, grad_raw_tilde, ev.policy_grad);
    }
  } else if (cfg.mode == Mode::kL2C2) {
    const DerivedGains gains = cfg.l2c2.gains();
    const nn::Tape policy_tilde = nets.policy.forward(samples.l2c2_tilde);
    const nn::Tape value_tilde = nets.value.forward(samples.l2c2_tilde);
    const auto pi_tilde = detail::distributions(policy_tilde.output, bounds);
    Eigen::MatrixXd grad_raw_tilde = Eigen::MatrixXd::Zero(2 * act_dim, n);
    Eigen::MatrixXd grad_value_tilde = Eigen::MatrixXd::Zero(heads, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double d = state_distance(batch.states.col(i), samples.l2c2_tilde.col(i),
                                      batch.next_states.col(i), gains.epsilon);
      const L2C2Terms t = l2c2_terms(pi_s[k], pi_tilde[k], value_s.output.col(i),
                                     value_tilde.output.col(i), d, gains);
      ev.metrics.policy_reg += inv_n * t.policy;
      ev.metrics.value_reg += inv_n * t.value;
      if (with_gradients) {
        L2C2TermGrads g = l2c2_terms_grad(pi_s[k], pi_tilde[k], value_s.output.col(i),
                                          value_tilde.output.col(i), d, gains);
        g.policy.first.mean *= inv_n;
        g.policy.first.std *= inv_n;
        g.policy.second.mean *= inv_n;
        g.policy.second.std *= inv_n;
        detail::add_raw_grad(grad_raw_s, i, policy_s.output, bounds, g.policy.first);
        detail::add_raw_grad(grad_raw_tilde, i, policy_tilde.output, bounds, g.policy.second);
        grad_value_s.col(i) += inv_n * g.value_s;
        grad_value_tilde.col(i) += inv_n * g.value_tilde;
      }
    }
    if (with_gradients) {
      nets.policy.backward(policy_tilde, grad_raw_tilde, ev.policy_grad);
      nets.value.backward(value_tilde, grad_value_tilde, ev.value_grad);
    }
  }

  if (with_gradients) {
    nets.policy.backward(policy_s, grad_raw_s, ev.policy_grad);
    nets.value.backward(value_s, grad_value_s, ev.value_grad);
  }
  return ev;
}

struct ActResult {
  Eigen::VectorXd action;      // clipped to the action bounds; sent to the environment
  Eigen::VectorXd raw_action;  // unclipped sample; stored for replay
  Eigen::VectorXd mean;
  double log_density = 0.0;    // of raw_action
};

/// Actor-critic learner owning the policy, the value ensemble, their target
/// copies and optimizer states.
class Agent {
 public:
  Agent(const envs::EnvSpec& env, AgentConfig config, std::uint64_t seed)
      : config_(std::move(config)), bounds_(env.action_bounds), env_id_(env.id),
        reg_rng_(envs::make_stream(seed, 4)) {
    config_.validate();
    std::mt19937_64 init = envs::make_stream(seed, 3);
    nn::Architecture pa{env.observation_dim, {config_.hidden.begin(), config_.hidden.end()},
                        2 * env.action_dim};
    nn::Architecture va{env.observation_dim, {config_.hidden.begin(), config_.hidden.end()},
                        config_.heads};
    nets_.policy = nn::MlpNetwork(pa, init, config_.policy_output_scale);
    nets_.value = nn::MlpNetwork(va, init);
    nets_.policy_target = nets_.policy;
    nets_.value_target = nets_.value;
    nn::AdamConfig opt{config_.learning_rate};
    policy_opt_ = nn::Adam(nets_.policy, opt);
    value_opt_ = nn::Adam(nets_.value, opt);
  }

  /// Rebuilds an agent from saved parameters (see checkpoint.hpp).
  Agent(std::string env_id, Eigen::VectorXd bounds, AgentConfig config, Networks nets,
        nn::Adam policy_opt, nn::Adam value_opt)
      : config_(std::move(config)), bounds_(std::move(bounds)), env_id_(std::move(env_id)),
        nets_(std::move(nets)), policy_opt_(std::move(policy_opt)), value_opt_(std::move(value_opt)) {
    config_.validate();
    if (nets_.policy.output_dim() != 2 * bounds_.size()) {
      throw DimensionError("Agent: policy output does not match the action dimension");
    }
  }

  [[nodiscard]] const AgentConfig& config() const { return config_; }
  [[nodiscard]] const Networks& networks() const { return nets_; }
  Networks& mutable_networks() { return nets_; }
  [[nodiscard]] const nn::Adam& policy_optimizer() const { return policy_opt_; }
  [[nodiscard]] const nn::Adam& value_optimizer() const { return value_opt_; }
  [[nodiscard]] const Eigen::VectorXd& action_bounds() const { return bounds_; }
  [[nodiscard]] const std::string& env_id() const { return env_id_; }

  [[nodiscard]] policy::GaussianPolicyOutput policy_output(const Eigen::VectorXd& obs) const {
    if (obs.size() != nets_.policy.input_dim()) throw DimensionError("Agent: observation dimension mismatch");
    return policy::map_net_output(nets_.policy.forward(obs), bounds_);
  }

  /// Deterministic: the mean. Stochastic: a Gaussian sample. Both clipped.
  template <typename Rng>
  ActResult act(const Eigen::VectorXd& obs, bool deterministic, Rng& rng) const {
    const auto p = policy_output(obs);
    ActResult r;
    r.mean = p.mean;
    if (deterministic) {
      r.raw_action = p.mean;
      r.log_density = policy::log_prob(p, p.mean);
    } else {
      const auto s = policy::sample(p, rng);
      r.raw_action = s.action;
      r.log_density = s.log_density;
    }
    r.action = r.raw_action.cwiseMax(-bounds_).cwiseMin(bounds_);
    return r;
  }

  /// Draws the perturbed states the current mode needs (none for vanilla).
  RegularizerSamples sample_regularizer_inputs(const TrainingBatch& batch) {
    RegularizerSamples s;
    if (config_.mode == Mode::kL2C2) {
      s.l2c2_tilde.resize(batch.states.rows(), batch.size());
      for (Eigen::Index i = 0; i < batch.size(); ++i) {
        s.l2c2_tilde.col(i) = sample_tilde(batch.states.col(i), batch.next_states.col(i), config_.l2c2, reg_rng_);
      }
    } else if (config_.mode == Mode::kCaps) {
      s.caps_tilde.resize(batch.states.rows(), batch.size());
      for (Eigen::Index i = 0; i < batch.size(); ++i) {
        s.caps_tilde.col(i) = sample_caps_tilde(batch.states.col(i), config_.caps, reg_rng_);
      }
    }
    return s;
  }

  /// One optimization step on a given batch and regularizer samples; returns
  /// the loss terms and the TD errors y - V(s).
  std::pair<LossMetrics, Eigen::VectorXd> update(const TrainingBatch& batch, const RegularizerSamples& samples) {
    ObjectiveEvaluation ev = evaluate_objective(nets_, bounds_, config_, batch, samples);
    if (!std::isfinite(ev.metrics.total())) {
      std::ostringstream msg;
      msg << "non-finite loss: value=" << ev.metrics.value_loss << " policy=" << ev.metrics.policy_loss
          << " policy_reg=" << ev.metrics.policy_reg << " value_reg=" << ev.metrics.value_reg;
      throw NumericalError(msg.str());
    }
    policy_opt_.step(nets_.policy, ev.policy_grad);
    value_opt_.step(nets_.value, ev.value_grad);
    nn::soft_update(nets_.policy_target, nets_.policy, config_.tau);
    nn::soft_update(nets_.value_target, nets_.value, config_.tau);
    return {ev.metrics, ev.td_errors};
  }

  /// Samples a batch from the buffer, updates both networks, refreshes the
  /// sampled priorities from |y - V(s)| and soft-updates the targets.
  template <typename Rng>
  LossMetrics train_step(replay::PerBuffer& buffer, Rng& replay_rng) {
    const replay::SampledBatch sampled = buffer.sample_batch(replay_rng);
    const TrainingBatch batch = TrainingBatch::from(sampled);
    const RegularizerSamples samples = sample_regularizer_inputs(batch);
    auto [metrics, td] = update(batch, samples);
    buffer.update_priorities(batch.indices, std::vector<double>(td.data(), td.data() + td.size()));
    return metrics;
  }

 private:
  AgentConfig config_;
  Eigen::VectorXd bounds_;
  std::string env_id_;
  Networks nets_;
  nn::Adam policy_opt_;
  nn::Adam value_opt_;
  std::mt19937_64 reg_rng_{0};
};

}  // namespace smoothrl::learner

#endif  // SMOOTHRL_LEARNER_AGENT_HPP
