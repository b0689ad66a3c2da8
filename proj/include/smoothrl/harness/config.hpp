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

#ifndef SMOOTHRL_HARNESS_CONFIG_HPP
#define SMOOTHRL_HARNESS_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "smoothrl/envs/catalog.hpp"
#include "smoothrl/errors.hpp"
#include "smoothrl/learner/config.hpp"
#include "smoothrl/replay/per_buffer.hpp"

namespace smoothrl::harness {

struct ExperimentConfig {
  std::string env = "pendulum-swingup";
  std::optional<double> env_noise;  // unset: the environment's default scale
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::uint64_t total_steps = 100000;
  std::uint64_t warmup_steps = 1000;
  int updates_per_step = 1;
  int eval_episodes = 100;
  std::string out_dir = "runs";
  bool log_wall_clock = false;
  learner::AgentConfig agent;
  replay::PerConfig per;

  void validate() const {
    (void)envs::make_env(env, env_noise);
    if (seeds.empty()) throw ConfigError("seeds must name at least one seed");
    if (total_steps < 1) throw ConfigError("total_steps must be >= 1");
    if (updates_per_step < 0) throw ConfigError("train.updates_per_step must be >= 0");
    if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
    if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
    agent.validate();
    per.validate();
  }
};

class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(int line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& v) {
  if (v == "inf" || v == "+inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("expected a number, got '" + v + "'");
  return out;
}

inline std::uint64_t parse_uint(const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("expected a non-negative integer, got '" + v + "'");
  return out;
}

inline int parse_int(const std::string& v) {
  int out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("expected an integer, got '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& v, F parse_one) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_one(trim(item)));
  return out;
}

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(items[i]);
  }
  return out;
}

struct Key {
  std::string name;
  std::string comment;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::optional<std::string>(const ExperimentConfig&)> get;  // nullopt: unset
};

inline const std::vector<Key>& keys() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::vector<Key> k = {
      {"env", "environment id: pendulum-swingup | point-reacher",
       [](C& c, S v) { c.env = v; }, [](const C& c) { return std::optional(c.env); }},
      {"env.noise", "observation noise std; unset uses the environment default (0.01)",
       [](C& c, S v) { c.env_noise = parse_double(v); },
       [](const C& c) -> std::optional<std::string> {
         if (!c.env_noise) return std::nullopt;
         return format_double(*c.env_noise);
       }},
      {"mode", "vanilla | caps | l2c2",
       [](C& c, S v) { c.agent.mode = learner::parse_mode(v); },
       [](const C& c) { return std::optional(std::string(learner::to_string(c.agent.mode))); }},
      {"seeds", "comma-separated run seeds",
       [](C& c, S v) { c.seeds = parse_list<std::uint64_t>(v, parse_uint); },
       [](const C& c) { return std::optional(join(c.seeds)); }},
      {"total_steps", "environment steps per run (desk-scale budget)",
       [](C& c, S v) { c.total_steps = parse_uint(v); },
       [](const C& c) { return std::optional(std::to_string(c.total_steps)); }},
      {"train.warmup_steps", "steps collected before the first update",
       [](C& c, S v) { c.warmup_steps = parse_uint(v); },
       [](const C& c) { return std::optional(std::to_string(c.warmup_steps)); }},
      {"train.updates_per_step", "gradient updates per environment step",
       [](C& c, S v) { c.updates_per_step = parse_int(v); },
       [](const C& c) { return std::optional(std::to_string(c.updates_per_step)); }},
      {"eval_episodes", "deterministic rollouts after training",
       [](C& c, S v) { c.eval_episodes = parse_int(v); },
       [](const C& c) { return std::optional(std::to_string(c.eval_episodes)); }},
      {"out_dir", "output directory for curves and checkpoints",
       [](C& c, S v) { c.out_dir = v; }, [](const C& c) { return std::optional(c.out_dir); }},
      {"log.wall_clock", "record wall-clock seconds in curves (breaks byte-level reproducibility)",
       [](C& c, S v) { c.log_wall_clock = parse_bool(v); },
       [](const C& c) { return std::optional(std::string(c.log_wall_clock ? "true" : "false")); }},
      {"gamma", "discount factor",
       [](C& c, S v) { c.agent.gamma = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.gamma)); }},
      {"tau", "target-network soft update rate",
       [](C& c, S v) { c.agent.tau = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.tau)); }},
      {"policy.clip", "importance-ratio clip radius; inf disables the ratio",
       [](C& c, S v) { c.agent.clip_radius = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.clip_radius)); }},
      {"policy.entropy", "weight of the -sum(log std) exploration term in the policy loss",
       [](C& c, S v) { c.agent.entropy_coef = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.entropy_coef)); }},
      {"policy.output_scale", "initial scale of the policy output layer",
       [](C& c, S v) { c.agent.policy_output_scale = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.policy_output_scale)); }},
      {"value.heads", "value ensemble size",
       [](C& c, S v) { c.agent.heads = parse_int(v); },
       [](const C& c) { return std::optional(std::to_string(c.agent.heads)); }},
      {"network.hidden", "hidden layer widths",
       [](C& c, S v) { c.agent.hidden = parse_list<long>(v, [](const std::string& s) { return static_cast<long>(parse_int(s)); }); },
       [](const C& c) { return std::optional(join(c.agent.hidden)); }},
      {"optimizer.lr", "adaptive-moment learning rate",
       [](C& c, S v) { c.agent.learning_rate = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.learning_rate)); }},
      {"per.capacity", "replay capacity N_c",
       [](C& c, S v) { c.per.capacity = parse_uint(v); },
       [](const C& c) { return std::optional(std::to_string(c.per.capacity)); }},
      {"per.batch_size", "minibatch size N_b",
       [](C& c, S v) { c.per.batch_size = parse_uint(v); },
       [](const C& c) { return std::optional(std::to_string(c.per.batch_size)); }},
      {"per.alpha", "priority exponent",
       [](C& c, S v) { c.per.alpha = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.per.alpha)); }},
      {"per.beta", "importance-weight exponent",
       [](C& c, S v) { c.per.beta = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.per.beta)); }},
      {"caps.sigma", "absolute std of the spatial perturbation",
       [](C& c, S v) { c.agent.caps.sigma = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.caps.sigma)); }},
      {"caps.lambda_t", "temporal smoothing gain",
       [](C& c, S v) { c.agent.caps.lambda_t = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.caps.lambda_t)); }},
      {"caps.lambda_s", "spatial smoothing gain",
       [](C& c, S v) { c.agent.caps.lambda_s = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.caps.lambda_s)); }},
      {"l2c2.sigma", "relative size of the transition neighbourhood",
       [](C& c, S v) { c.agent.l2c2.sigma = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.l2c2.sigma)); }},
      {"l2c2.lambda_lower", "lower bound of the effective gain",
       [](C& c, S v) { c.agent.l2c2.lambda_lower = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.l2c2.lambda_lower)); }},
      {"l2c2.lambda_upper", "upper bound of the effective gain",
       [](C& c, S v) { c.agent.l2c2.lambda_upper = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.l2c2.lambda_upper)); }},
      {"l2c2.beta", "value-to-policy gain ratio",
       [](C& c, S v) { c.agent.l2c2.beta = parse_double(v); },
       [](const C& c) { return std::optional(format_double(c.agent.l2c2.beta)); }},
      {"l2c2.lambda_pi", "override of the derived policy gain (ablations)",
       [](C& c, S v) { c.agent.l2c2.lambda_pi_override = parse_double(v); },
       [](const C& c) -> std::optional<std::string> {
         if (!c.agent.l2c2.lambda_pi_override) return std::nullopt;
         return format_double(*c.agent.l2c2.lambda_pi_override);
       }},
      {"l2c2.lambda_v", "override of the derived value gain (ablations)",
       [](C& c, S v) { c.agent.l2c2.lambda_v_override = parse_double(v); },
       [](const C& c) -> std::optional<std::string> {
         if (!c.agent.l2c2.lambda_v_override) return std::nullopt;
         return format_double(*c.agent.l2c2.lambda_v_override);
       }},
  };
  return k;
}

}  // namespace detail

/// Parses the flat `key = value` format. Blank lines and `#` comments are
/// ignored; unknown or repeated keys are errors. The result is validated.
inline ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigParseError(line_no, "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigParseError(line_no, "missing value for '" + key + "'");
    const auto& keys = detail::keys();
    auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.name == key; });
    if (it == keys.end()) throw ConfigParseError(line_no, "unknown key '" + key + "'");
    if (auto [pos, fresh] = seen.emplace(key, line_no); !fresh) {
      throw ConfigParseError(line_no, "key '" + key + "' already set on line " + std::to_string(pos->second));
    }
    try {
      it->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigParseError(line_no, key + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Serializes every set key; with `comments` each key is preceded by a
/// description line. parse_config_text(to_text(c)) reproduces c.
inline std::string to_text(const ExperimentConfig& cfg, bool comments = false) {
  std::ostringstream out;
  for (const auto& k : detail::keys()) {
    const auto v = k.get(cfg);
    if (comments) out << "# " << k.comment << "\n";
    if (v) {
      out << k.name << " = " << *v << "\n";
    } else if (comments) {
      out << "# " << k.name << " =\n";
    }
  }
  return out.str();
}

}  // namespace smoothrl::harness

#endif  // SMOOTHRL_HARNESS_CONFIG_HPP
