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

// Command-line front end: train, eval, report, --print-defaults.
//
// Exit codes: 0 success, 1 configuration/usage error, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "smoothrl/errors.hpp"
#include "smoothrl/harness/config.hpp"
#include "smoothrl/harness/report.hpp"
#include "smoothrl/harness/training.hpp"
#include "smoothrl/nn/serialization.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

int train(const std::string& config_path, const std::optional<std::string>& mode,
          const std::optional<std::uint64_t>& seed, const std::optional<std::uint64_t>& num_seeds,
          const std::optional<std::string>& out) {
  using namespace smoothrl;
  harness::ExperimentConfig cfg =
      config_path.empty() ? harness::ExperimentConfig{} : harness::parse_config(config_path);
  if (mode) cfg.agent.mode = learner::parse_mode(*mode);
  if (seed || num_seeds) {
    const std::uint64_t first = seed.value_or(0);
    const std::uint64_t count = num_seeds.value_or(1);
    if (count < 1) throw ConfigError("--seeds must be >= 1");
    cfg.seeds.clear();
    for (std::uint64_t k = 0; k < count; ++k) cfg.seeds.push_back(first + k);
  }
  if (out) cfg.out_dir = *out;
  cfg.validate();
  const auto runs = harness::run_training(cfg);
  for (const auto& r : runs) {
    const auto s = harness::run_eval(r.checkpoint_path, cfg.env, cfg.eval_episodes, r.seed);
    std::cout << "seed " << r.seed << ": " << r.curve_path << " " << r.checkpoint_path << "\n";
    std::printf("  eval over %d episodes: score %.4f (%.4f) smoothness %.6f (%.6f)\n", s.episodes, s.score.mean,
                s.score.std, s.smoothness.mean, s.smoothness.std);
  }
  return 0;
}

int eval(const std::string& checkpoint, const std::string& env, int episodes, std::uint64_t seed) {
  const auto s = smoothrl::harness::run_eval(checkpoint, env, episodes, seed);
  std::printf("episodes %d\nscore %.4f (%.4f)\nsmoothness %.6f (%.6f)\n", s.episodes, s.score.mean,
              s.score.std, s.smoothness.mean, s.smoothness.std);
  return 0;
}

int report(const std::string& dir, std::size_t window) {
  using namespace smoothrl;
  const auto methods = harness::discover_runs(dir);
  if (methods.empty()) throw ConfigError("no learning curves found in '" + dir + "'");
  const auto rows = harness::compare_report(methods, window);
  const auto path = (std::filesystem::path(dir) / "report.csv").string();
  nn::write_file(path, harness::report_csv(rows));
  std::cout << harness::report_table(rows) << "written " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smoothness-regularized actor-critic experiments"};
  app.require_subcommand(0, 1);
  bool print_defaults = false;
  app.add_flag("--print-defaults", print_defaults, "Print the default configuration and exit");

  std::string config_path;
  std::optional<std::string> mode, out;
  std::optional<std::uint64_t> seed, num_seeds;
  auto* train_cmd = app.add_subcommand("train", "Train one agent per seed and write learning curves");
  train_cmd->add_option("--config", config_path, "Configuration file (key = value)");
  train_cmd->add_option("--mode", mode, "vanilla | caps | l2c2")->check(CLI::IsMember({"vanilla", "caps", "l2c2"}));
  train_cmd->add_option("--seed", seed, "First seed");
  train_cmd->add_option("--seeds", num_seeds, "Number of consecutive seeds");
  train_cmd->add_option("--out", out, "Output directory");

  std::string checkpoint, env_id;
  int episodes = 100;
  std::uint64_t eval_seed = 0;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate the deterministic policy of a checkpoint");
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("--env", env_id, "Environment id")->required();
  eval_cmd->add_option("--episodes", episodes, "Number of episodes")->capture_default_str();
  eval_cmd->add_option("--seed", eval_seed, "Evaluation seed")->capture_default_str();

  std::string in_dir;
  std::size_t window = 20;
  auto* report_cmd = app.add_subcommand("report", "Summarize learning curves per method");
  report_cmd->add_option("--in", in_dir, "Directory with learning-curve CSVs")->required();
  report_cmd->add_option("--window", window, "Final episodes averaged per run")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (print_defaults) {
      std::cout << smoothrl::harness::to_text(smoothrl::harness::ExperimentConfig{}, true);
      return 0;
    }
    if (*train_cmd) return train(config_path, mode, seed, num_seeds, out);
    if (*eval_cmd) return eval(checkpoint, env_id, episodes, eval_seed);
    if (*report_cmd) return report(in_dir, window);
    std::cerr << app.help();
    return kExitConfig;
  } catch (const smoothrl::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
