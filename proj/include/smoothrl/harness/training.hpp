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

#ifndef SMOOTHRL_HARNESS_TRAINING_HPP
#define SMOOTHRL_HARNESS_TRAINING_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "smoothrl/envs/catalog.hpp"
#include "smoothrl/errors.hpp"
#include "smoothrl/harness/config.hpp"
#include "smoothrl/harness/metrics.hpp"
#include "smoothrl/learner/agent.hpp"
#include "smoothrl/learner/checkpoint.hpp"
#include "smoothrl/replay/per_buffer.hpp"

namespace smoothrl::harness {

/// One row of a learning curve, written once per finished training episode.
struct CurveRecord {
  std::uint64_t episode = 0;
  std::uint64_t env_steps = 0;
  double episode_return = 0.0;
  double smoothness = 0.0;
  double value_loss = 0.0;
  double policy_loss = 0.0;
  double policy_reg = 0.0;
  double value_reg = 0.0;
  double wall_seconds = 0.0;
};

inline constexpr const char* kCurveHeader =
    "episode,env_steps,return,smoothness,value_loss,policy_loss,policy_reg,value_reg,wall_seconds";

inline std::string format_record(const CurveRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%llu,%llu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.3f",
                static_cast<unsigned long long>(r.episode), static_cast<unsigned long long>(r.env_steps),
                r.episode_return, r.smoothness, r.value_loss, r.policy_loss, r.policy_reg, r.value_reg,
                r.wall_seconds);
  return buf;
}

inline std::string run_stem(const std::string& env, learner::Mode mode, std::uint64_t seed) {
  return env + "_" + std::string(learner::to_string(mode)) + "_seed" + std::to_string(seed);
}

/// Reset seed of the k-th episode of a run. Training and evaluation episodes
/// come from disjoint families.
inline std::uint64_t episode_seed(std::uint64_t run_seed, std::uint64_t episode, bool evaluation) {
  std::uint64_t x = run_seed * 0x9E3779B97F4A7C15ull + episode + (evaluation ? 0x8000000000000000ull : 0);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

struct RunArtifacts {
  std::uint64_t seed = 0;
  std::string curve_path;
  std::string checkpoint_path;
};

/// Trains one seed: stochastic acting, one replay push per step, and
/// `updates_per_step` learner updates once the warm-up is collected.
inline RunArtifacts run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const std::string stem = run_stem(cfg.env, cfg.agent.mode, seed);
  RunArtifacts art{seed, (fs::path(cfg.out_dir) / (stem + ".csv")).string(),
                   (fs::path(cfg.out_dir) / (stem + ".ckpt")).string()};

  auto env = envs::make_env(cfg.env, cfg.env_noise);
  learner::Agent agent(env->spec(), cfg.agent, seed);
  replay::PerBuffer buffer(cfg.per);
  std::mt19937_64 action_rng = envs::make_stream(seed, 5);
  std::mt19937_64 replay_rng = envs::make_stream(seed, 6);

  std::ofstream csv(art.curve_path, std::ios::trunc);
  if (!csv) throw IoError("cannot write '" + art.curve_path + "'");
  csv << kCurveHeader << "\n";

  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t first_update = std::max<std::uint64_t>(cfg.warmup_steps, cfg.per.batch_size);
  std::uint64_t episode = 0;
  Eigen::VectorXd obs = env->reset(episode_seed(seed, episode, false));
  std::vector<Eigen::VectorXd> means;
  double ep_return = 0.0;
  learner::LossMetrics sum;
  std::uint64_t n_updates = 0;

  for (std::uint64_t step = 1; step <= cfg.total_steps; ++step) {
    const auto act = agent.act(obs, false, action_rng);
    means.push_back(act.mean);
    const auto res = env->step(act.action);
    ep_return += res.reward;
    buffer.push({obs, act.raw_action, res.observation, res.reward, res.terminal, act.log_density});
    if (step >= first_update) {
      for (int k = 0; k < cfg.updates_per_step; ++k) {
        const auto m = agent.train_step(buffer, replay_rng);
        sum.value_loss += m.value_loss;
        sum.policy_loss += m.policy_loss;
        sum.policy_reg += m.policy_reg;
        sum.value_reg += m.value_reg;
        ++n_updates;
      }
    }
    obs = res.observation;
    if (res.done) {
      CurveRecord rec;
      rec.episode = episode;
      rec.env_steps = step;
      rec.episode_return = ep_return;
      rec.smoothness = means.size() >= 2 ? smoothness_metric(means) : 0.0;
      if (n_updates > 0) {
        const double inv = 1.0 / static_cast<double>(n_updates);
        rec.value_loss = sum.value_loss * inv;
        rec.policy_loss = sum.policy_loss * inv;
        rec.policy_reg = sum.policy_reg * inv;
        rec.value_reg = sum.value_reg * inv;
      }
      if (cfg.log_wall_clock) {
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
      csv << format_record(rec) << "\n";
      csv.flush();
      ++episode;
      obs = env->reset(episode_seed(seed, episode, false));
      means.clear();
      ep_return = 0.0;
      sum = {};
      n_updates = 0;
    }
  }
  learner::save_checkpoint(agent, to_text(cfg), art.checkpoint_path);
  return art;
}

/// Worker cap from SMOOTHRL_THREADS, else the hardware concurrency.
inline unsigned worker_limit() {
  if (const char* env = std::getenv("SMOOTHRL_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs every configured seed as an independent worker and returns the
/// artifacts in seed order. The first failure is rethrown after all workers
/// have stopped.
inline std::vector<RunArtifacts> run_training(const ExperimentConfig& cfg, unsigned max_workers = 0) {
  cfg.validate();
  const unsigned workers =
      std::min<unsigned>(max_workers ? max_workers : worker_limit(), static_cast<unsigned>(cfg.seeds.size()));
  std::vector<RunArtifacts> out(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
      try {
        out[i] = run_seed(cfg, cfg.seeds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct EvalSummary {
  int episodes = 0;
  MeanStd score;
  MeanStd smoothness;
  std::vector<double> returns;
  std::vector<double> smoothness_values;
};

/// Rolls out the deterministic (mean) policy of an agent.
inline EvalSummary evaluate_agent(const learner::Agent& agent, envs::Environment& env, int episodes,
                                  std::uint64_t seed) {
  if (episodes < 1) throw ConfigError("evaluation needs at least one episode");
  if (env.spec().observation_dim != agent.networks().policy.input_dim() ||
      env.spec().action_dim != agent.action_bounds().size()) {
    throw DimensionError("agent does not fit environment '" + env.spec().id + "'");
  }
  EvalSummary s;
  s.episodes = episodes;
  std::mt19937_64 unused(0);
  for (int e = 0; e < episodes; ++e) {
    Eigen::VectorXd obs = env.reset(episode_seed(seed, static_cast<std::uint64_t>(e), true));
    std::vector<Eigen::VectorXd> means;
    double ret = 0.0;
    bool done = false;
    while (!done) {
      const auto act = agent.act(obs, true, unused);
      means.push_back(act.mean);
      const auto res = env.step(act.action);
      ret += res.reward;
      obs = res.observation;
      done = res.done;
    }
    s.returns.push_back(ret);
    s.smoothness_values.push_back(means.size() >= 2 ? smoothness_metric(means) : 0.0);
  }
  s.score = mean_std(s.returns);
  s.smoothness = mean_std(s.smoothness_values);
  return s;
}

inline learner::Agent agent_from_checkpoint(const learner::Checkpoint& ckpt) {
  const ExperimentConfig cfg = parse_config_text(ckpt.config_text);
  return learner::Agent(ckpt.env_id, ckpt.action_bounds, cfg.agent, ckpt.networks, ckpt.policy_optimizer,
                        ckpt.value_optimizer);
}

/// Loads a checkpoint and evaluates it on `env_id`. The checkpoint file is
/// only read.
inline EvalSummary run_eval(const std::string& checkpoint_path, const std::string& env_id, int episodes,
                            std::uint64_t seed, std::optional<double> noise = std::nullopt) {
  const learner::Checkpoint ckpt = learner::load_checkpoint(checkpoint_path);
  if (ckpt.env_id != env_id) {
    throw ConfigError("checkpoint was trained on '" + ckpt.env_id + "', not '" + env_id + "'");
  }
  const learner::Agent agent = agent_from_checkpoint(ckpt);
  const ExperimentConfig cfg = parse_config_text(ckpt.config_text);
  auto env = envs::make_env(env_id, noise ? noise : cfg.env_noise);
  return evaluate_agent(agent, *env, episodes, seed);
}

}  // namespace smoothrl::harness

#endif  // SMOOTHRL_HARNESS_TRAINING_HPP
