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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "smoothrl/errors.hpp"
#include "smoothrl/harness/config.hpp"
#include "smoothrl/harness/metrics.hpp"
#include "smoothrl/harness/report.hpp"
#include "smoothrl/harness/training.hpp"

namespace {

using namespace smoothrl;
using namespace smoothrl::harness;
namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("smoothrl_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }

ExperimentConfig tiny(const fs::path& out, learner::Mode mode) {
  ExperimentConfig c;
  c.seeds = {3};
  c.total_steps = 600;
  c.warmup_steps = 100;
  c.out_dir = out.string();
  c.agent.mode = mode;
  c.agent.hidden = {16, 16};
  c.eval_episodes = 2;
  return c;
}

TEST(Smoothness, Examples) {
  EXPECT_EQ(smoothness_metric({v1(0.3), v1(0.3), v1(0.3)}), 0.0);
  EXPECT_DOUBLE_EQ(smoothness_metric({v1(0), v1(1), v1(0), v1(1)}), 1.0);
  std::vector<Eigen::VectorXd> seq, doubled;
  for (double x : {0.1, -0.7, 0.4, 0.9}) {
    Eigen::VectorXd a(2);
    a << x, x * x;
    seq.push_back(a);
    doubled.push_back(2.0 * a);
  }
  EXPECT_NEAR(smoothness_metric(doubled), 2.0 * smoothness_metric(seq), 1e-15);
  EXPECT_THROW(smoothness_metric({v1(1)}), ConfigError);
}

TEST(Stats, QuantilesAndSpread) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_EQ(iqr({1, 2, 3, 4, 5}), 2.0);
  EXPECT_EQ(iqr({7}), 0.0);
  EXPECT_EQ(mean_std({5}).std, 0.0);
  EXPECT_DOUBLE_EQ(mean_std({1, 3}).std, std::sqrt(2.0));
  EXPECT_THROW(median({}), ConfigError);
}

TEST(Config, EmptyTextGivesDefaults) {
  const ExperimentConfig c = parse_config_text("");
  EXPECT_EQ(c.agent.gamma, 0.99);
  EXPECT_EQ(c.agent.tau, 0.1);
  EXPECT_EQ(c.per.capacity, 10000u);
  EXPECT_EQ(c.per.batch_size, 32u);
  EXPECT_EQ(c.per.alpha, 1.0);
  EXPECT_EQ(c.per.beta, 0.5);
  EXPECT_EQ(c.agent.caps.sigma, 0.2);
  EXPECT_EQ(c.agent.caps.lambda_t, 0.01);
  EXPECT_EQ(c.agent.caps.lambda_s, 0.05);
  EXPECT_EQ(c.agent.l2c2.sigma, 1.0);
  EXPECT_EQ(c.agent.l2c2.lambda_lower, 0.01);
  EXPECT_EQ(c.agent.l2c2.lambda_upper, 1.0);
  EXPECT_EQ(c.agent.l2c2.beta, 0.1);
  EXPECT_EQ(c.eval_episodes, 100);
  EXPECT_EQ(c.seeds.size(), 5u);
}

TEST(Config, RejectsInfeasibleGainBounds) {
  EXPECT_THROW(parse_config_text("l2c2.lambda_upper = 0.005\n"), ConfigError);
}

TEST(Config, UnknownAndRepeatedKeysNameTheLine) {
  try {
    parse_config_text("gamma = 0.9\n\nbogus = 1\n");
    FAIL();
  } catch (const ConfigParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  try {
    parse_config_text("tau = 0.2\n# note\ntau = 0.3\n");
    FAIL();
  } catch (const ConfigParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_config_text("gamma 0.9\n"), ConfigParseError);
  EXPECT_THROW(parse_config_text("gamma = abc\n"), ConfigParseError);
  EXPECT_THROW(parse_config_text("mode = fancy\n"), ConfigError);
}

TEST(Config, RoundTripsThroughText) {
  const ExperimentConfig c = parse_config_text(
      "mode = caps\nseeds = 4, 9\npolicy.entropy = 0.02\nnetwork.hidden = 32, 8\nl2c2.lambda_pi = 0\n"
      "env.noise = 0.03  # louder\n");
  EXPECT_EQ(c.agent.mode, learner::Mode::kCaps);
  const std::string text = to_text(c);
  const ExperimentConfig back = parse_config_text(text);
  EXPECT_EQ(to_text(back), text);
  EXPECT_EQ(back.agent.mode, learner::Mode::kCaps);
  EXPECT_EQ(back.agent.entropy_coef, 0.02);
  EXPECT_EQ(back.seeds, (std::vector<std::uint64_t>{4, 9}));
  EXPECT_EQ(*back.env_noise, 0.03);
  // commented form parses to the same thing
  EXPECT_EQ(to_text(parse_config_text(to_text(c, true))), text);
}

TEST(Config, ShippedConfigsParse) {
  int n = 0;
  for (const auto& entry : fs::directory_iterator(SMOOTHRL_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(parse_config(entry.path().string())) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 1);
  EXPECT_EQ(to_text(parse_config(std::string(SMOOTHRL_CONFIG_DIR) + "/defaults.cfg")), to_text(ExperimentConfig{}));
}

TEST(Config, FileNotFound) { EXPECT_THROW(parse_config("/nonexistent/smoothrl.cfg"), ConfigError); }

void write_curve(const fs::path& p, const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out(p);
  out << kCurveHeader << "\n";
  std::uint64_t k = 0;
  for (const auto& [ret, smo] : rows) {
    CurveRecord r;
    r.episode = k;
    r.env_steps = 200 * (k + 1);
    r.episode_return = ret;
    r.smoothness = smo;
    out << format_record(r) << "\n";
    ++k;
  }
}

TEST(Report, KnownMedians) {
  const fs::path dir = scratch("report");
  write_curve(dir / "a.csv", {{-50, 9}, {10, 0.1}, {20, 0.3}});
  write_curve(dir / "b.csv", {{0, 0}, {30, 0.5}, {40, 0.7}});
  write_curve(dir / "c.csv", {{5, 5}, {100, 1.0}, {200, 1.0}});
  const auto rows = compare_report({{"x", {(dir / "a.csv").string(), (dir / "b.csv").string(),
                                            (dir / "c.csv").string()}}},
                                   2);
  ASSERT_EQ(rows.size(), 1u);
  // final-window means: returns 15, 35, 150; smoothness 0.2, 0.6, 1.0
  EXPECT_DOUBLE_EQ(rows[0].return_median, 35.0);
  EXPECT_DOUBLE_EQ(rows[0].return_iqr, (150.0 + 35.0) / 2 - (15.0 + 35.0) / 2);
  EXPECT_DOUBLE_EQ(rows[0].smoothness_median, 0.6);
  EXPECT_EQ(rows[0].runs, 3u);
}

TEST(Report, SingleRunAndDuplicateMethods) {
  const fs::path dir = scratch("report1");
  write_curve(dir / "a.csv", {{1, 0.5}, {3, 0.25}});
  const auto rows = compare_report({{"m1", {(dir / "a.csv").string()}}, {"m2", {(dir / "a.csv").string()}}}, 20);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].return_iqr, 0.0);
  EXPECT_EQ(rows[0].return_median, 2.0);
  EXPECT_EQ(rows[0].return_median, rows[1].return_median);
  EXPECT_EQ(rows[0].smoothness_median, rows[1].smoothness_median);
  EXPECT_EQ(rows[0].smoothness_median, 0.375);
}

TEST(Report, SchemaMismatch) {
  const fs::path dir = scratch("report2");
  std::ofstream(dir / "bad.csv") << "episode,return\n0,1\n";
  EXPECT_THROW(read_curve((dir / "bad.csv").string()), IoError);
  std::ofstream(dir / "short.csv") << kCurveHeader << "\n0,1,2\n";
  EXPECT_THROW(read_curve((dir / "short.csv").string()), IoError);
}

TEST(Report, DiscoverGroupsByEnvAndMode) {
  const fs::path dir = scratch("discover");
  write_curve(dir / "pendulum-swingup_caps_seed0.csv", {{1, 1}});
  write_curve(dir / "pendulum-swingup_caps_seed1.csv", {{1, 1}});
  write_curve(dir / "pendulum-swingup_vanilla_seed0.csv", {{1, 1}});
  std::ofstream(dir / "notes.txt") << "x";
  const auto runs = discover_runs(dir.string());
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs.at("pendulum-swingup/caps").size(), 2u);
}

TEST(Training, CurveSchemaAndVanillaRegColumns) {
  const fs::path dir = scratch("train_vanilla");
  const auto art = run_training(tiny(dir, learner::Mode::kVanilla));
  ASSERT_EQ(art.size(), 1u);
  std::ifstream in(art[0].curve_path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, kCurveHeader);
  const auto curve = read_curve(art[0].curve_path);
  ASSERT_EQ(curve.size(), 3u);  // 600 steps of 200-step episodes
  std::uint64_t last = 0;
  for (const auto& r : curve) {
    EXPECT_GT(r.env_steps, last);
    last = r.env_steps;
    EXPECT_EQ(r.policy_reg, 0.0);
    EXPECT_EQ(r.value_reg, 0.0);
    EXPECT_EQ(r.wall_seconds, 0.0);
    EXPECT_TRUE(std::isfinite(r.episode_return));
  }
  EXPECT_GT(curve.back().value_loss, 0.0);
  EXPECT_TRUE(fs::exists(art[0].checkpoint_path));
}

TEST(Training, RerunIsByteIdentical) {
  for (auto mode : {learner::Mode::kCaps, learner::Mode::kL2C2}) {
    const fs::path dir = scratch("det");
    const auto first = run_training(tiny(dir, mode));
    const std::string curve = slurp(first[0].curve_path), ckpt = slurp(first[0].checkpoint_path);
    const auto second = run_training(tiny(dir, mode));
    EXPECT_EQ(slurp(second[0].curve_path), curve);
    EXPECT_EQ(slurp(second[0].checkpoint_path), ckpt);
    EXPECT_GT(read_curve(first[0].curve_path).back().policy_reg, 0.0);
  }
}

TEST(Training, ParallelWorkersMatchSequential) {
  const fs::path a = scratch("par_a"), b = scratch("par_b");
  ExperimentConfig ca = tiny(a, learner::Mode::kL2C2), cb = tiny(b, learner::Mode::kL2C2);
  ca.seeds = cb.seeds = {0, 1};
  ca.total_steps = cb.total_steps = 400;
  const auto ra = run_training(ca, 1);
  const auto rb = run_training(cb, 2);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(slurp(ra[i].curve_path), slurp(rb[i].curve_path));
  EXPECT_NE(slurp(ra[0].curve_path), slurp(ra[1].curve_path));
}

TEST(Eval, SingleEpisodeHasZeroStdAndLeavesCheckpointAlone) {
  const fs::path dir = scratch("eval");
  const auto art = run_training(tiny(dir, learner::Mode::kVanilla));
  const std::string before = slurp(art[0].checkpoint_path);
  const auto one = run_eval(art[0].checkpoint_path, "pendulum-swingup", 1, 0);
  EXPECT_EQ(one.score.std, 0.0);
  EXPECT_EQ(one.smoothness.std, 0.0);
  const auto a = run_eval(art[0].checkpoint_path, "pendulum-swingup", 3, 5);
  const auto b = run_eval(art[0].checkpoint_path, "pendulum-swingup", 3, 5);
  EXPECT_EQ(a.returns, b.returns);
  EXPECT_EQ(a.smoothness_values, b.smoothness_values);
  EXPECT_EQ(slurp(art[0].checkpoint_path), before);
  EXPECT_THROW(run_eval(art[0].checkpoint_path, "point-reacher", 1, 0), ConfigError);
  EXPECT_THROW(run_eval((dir / "missing.ckpt").string(), "pendulum-swingup", 1, 0), IoError);
}

TEST(Eval, UntrainedPolicyDoesNotSwingUp) {
  auto env = envs::make_env("pendulum-swingup");
  learner::AgentConfig cfg;
  const learner::Agent agent(env->spec(), cfg, 0);
  const auto s = evaluate_agent(agent, *env, 10, 0);
  // a held-upright pendulum scores close to the 200-step maximum
  EXPECT_LT(s.score.mean, 0.0);
}

}  // namespace
