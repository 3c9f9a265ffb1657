// Copyright 2026 The lqgrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <bit>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "lqgrl/errors.hpp"
#include "lqgrl/experiment.hpp"
#include "lqgrl/presets.hpp"

namespace lqgrl {
namespace {

namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kScalarConfig = R"({
  "name": "scalar",
  "plant": {"nx": 1, "nu": 1, "nw": 1, "ny": 1,
            "A": [0.5], "B": [1], "Bw": [1], "C": [1],
            "Q": [1], "R": [1], "W": [1], "V": [1]},
  "policy": {"form": "ctrb_canonical", "order": 1},
  "train": {"lower": [-0.5, -0.5], "upper": [0.5, 0.5], "n_init": 8, "n_steps": 5,
            "b": 0.1, "seed": 3},
  "sweep": {"levels": [0, 0.2], "trials": 2}
})";

std::string config_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

ExperimentConfig tiny_doyle() {
  ExperimentConfig c = preset_config("doyle");
  c.train.n_init = 150;
  c.train.n_steps = 10;
  return c;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SweepRecord sample_row() {
  SweepRecord r;
  r.b = 0.1;
  r.trial = 4;
  r.seed = 18446744073709551615ull;
  r.reward = -1.0 / 3.0;
  r.cost = 1.0 / 3.0;
  r.disk_margin = 1.0000000000000002;
  r.disk_alpha = 4.9406564584124654e-324;
  r.gain_lo = -kInf;
  r.gain_hi = kInf;
  r.phase_deg = 1e-300;
  r.theta = {0.1, -2.5e17, 123456789.12345678};
  return r;
}

TEST(Config, Presets) {
  const ExperimentConfig d = preset_config("doyle");
  EXPECT_EQ(d.form, PolicyForm::companion2());
  EXPECT_EQ(d.sweep_levels, (std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4}));
  EXPECT_EQ(d.trials, 20);
  EXPECT_EQ(d.train.n_init, 500);
  EXPECT_EQ(d.train.n_steps, 100);
  const ExperimentConfig f = preset_config("flexible");
  EXPECT_EQ(f.form, PolicyForm::ctrb_canonical(3));
  EXPECT_EQ(f.trials, 25);
  EXPECT_NO_THROW(d.validate());
  EXPECT_NO_THROW(f.validate());
  EXPECT_THROW((void)preset_config("nope"), ConfigError);
}

TEST(Config, ExplicitPlant) {
  const ExperimentConfig c = parse_config(kScalarConfig);
  EXPECT_EQ(c.name, "scalar");
  EXPECT_EQ(c.plant.A(0, 0), 0.5);
  EXPECT_EQ(c.form, PolicyForm::ctrb_canonical(1));
  EXPECT_EQ(c.train.n_init, 8);
  EXPECT_EQ(c.train.perturbation.b, 0.1);
  EXPECT_EQ(c.train.seed, 3u);
  EXPECT_EQ(c.sweep_levels, (std::vector<double>{0.0, 0.2}));
  EXPECT_EQ(c.trials, 2);
}

TEST(Config, RowMajorMatrices) {
  const ExperimentConfig c = parse_config(R"({"preset": "doyle",
    "plant": {"nx": 2, "nu": 1, "nw": 1, "ny": 1,
      "A": [1, 2, 3, 4], "B": [0, 1], "Bw": [1, 0], "C": [1, 0],
      "Q": [1, 0, 0, 1], "R": [1], "W": [1], "V": [1]}})");
  EXPECT_EQ(c.plant.A(0, 1), 2.0);
  EXPECT_EQ(c.plant.A(1, 0), 3.0);
}

TEST(Config, PresetOverrides) {
  const ExperimentConfig c = parse_config(R"({"preset": "flexible", "train": {"n_init": 7}})");
  EXPECT_EQ(c.train.n_init, 7);
  EXPECT_EQ(c.form, PolicyForm::ctrb_canonical(3));
}

TEST(Config, SyntaxErrorsReportLineAndColumn) {
  const std::string msg = config_error("{\n  \"preset\": \"doyle\",\n  \"train\": {,}\n}");
  EXPECT_EQ(msg.rfind("config:3:", 0), 0u) << msg;
}

TEST(Config, SchemaErrorsNameTheField) {
  std::string text = kScalarConfig;
  std::string bad_r = text;
  bad_r.replace(bad_r.find("\"R\": [1]"), 8, "\"R\": [0]");
  EXPECT_EQ(config_error(bad_r).rfind("plant.R", 0), 0u) << config_error(bad_r);

  std::string short_a = text;
  short_a.replace(short_a.find("\"A\": [0.5]"), 10, "\"A\": [0.5, 1]");
  EXPECT_EQ(config_error(short_a).rfind("plant.A", 0), 0u);

  std::string unsorted = text;
  unsorted.replace(unsorted.find("[0, 0.2]"), 8, "[0.2, 0]");
  EXPECT_EQ(config_error(unsorted).rfind("sweep.levels", 0), 0u);

  EXPECT_EQ(config_error(R"({"preset": "doyle", "train": {"quadrature_order": 4}})").rfind("train", 0), 0u);
  EXPECT_EQ(config_error(R"({"preset": "doyle", "train": {"n_init": "many"}})"), "train.n_init: expected an integer");
  EXPECT_EQ(config_error(R"({"preset": "doyle", "trian": {}})"), "trian: unknown field");
  EXPECT_EQ(config_error(R"({"preset": "doyle", "train": {"lower": [0, 0]}})").rfind("train", 0), 0u);
  EXPECT_EQ(config_error(R"({"preset": "doyle", "policy": {"form": "neural"}})").rfind("policy.form", 0), 0u);
  EXPECT_EQ(config_error(R"({"name": "x"})").rfind("plant", 0), 0u);
  EXPECT_EQ(config_error("[1, 2]"), "config: expected an object");
}

TEST(Config, LoadFromFile) {
  const fs::path path = fs::temp_directory_path() / "lqgrl_config_test.json";
  std::ofstream(path) << kScalarConfig;
  EXPECT_EQ(load_config(path.string()).name, "scalar");
  fs::remove(path);
  EXPECT_THROW((void)load_config(path.string()), ConfigError);
}

TEST(Numbers, FormatAndParse) {
  EXPECT_EQ(format_double(kInf), "inf");
  EXPECT_EQ(format_double(-kInf), "-inf");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(parse_double("inf"), kInf);
  EXPECT_EQ(parse_double("-inf"), -kInf);
  EXPECT_EQ(parse_double("+2.5"), 2.5);
  EXPECT_THROW((void)parse_double(""), ConfigError);
  EXPECT_THROW((void)parse_double("1.5x"), ConfigError);
  EXPECT_EQ(parse_number_list("1, 2 3,\n-4e1"), (std::vector<double>{1, 2, 3, -40}));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::bit_cast<double>(rng());
    if (!std::isfinite(x)) continue;
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
}

TEST(SweepCsv, BitExactHeader) {
  EXPECT_EQ(sweep_csv_header(4),
            "b,trial,seed,J,cost,md,alpha,gain_lo,gain_hi,phase_deg,theta1,theta2,theta3,theta4");
}

TEST(SweepCsv, RoundTripIsLossless) {
  SweepRecord unstable;
  unstable.b = 0.4;
  unstable.trial = 0;
  unstable.seed = 1;
  unstable.reward = -kInf;
  unstable.cost = kInf;
  unstable.theta = {0.0, 0.0, 0.0};
  const std::vector<SweepRecord> rows{unstable, sample_row()};
  std::ostringstream out;
  write_sweep_csv(out, rows, 3);
  std::istringstream in(out.str());
  const std::vector<SweepRecord> back = read_sweep_csv(in);
  EXPECT_EQ(back, rows);
  std::ostringstream again;
  write_sweep_csv(again, back, 3);
  EXPECT_EQ(again.str(), out.str());
  EXPECT_NE(out.str().find(format_double(0.4) + ",0,1,-inf,inf,,,,,,0,0,0\n"), std::string::npos)
      << out.str();
}

TEST(SweepCsv, MalformedInput) {
  std::istringstream bad_header("b,trial\n");
  EXPECT_THROW((void)read_sweep_csv(bad_header), ConfigError);
  std::istringstream short_row(sweep_csv_header(1) + "\n0,1,2\n");
  EXPECT_THROW((void)read_sweep_csv(short_row), ConfigError);
  std::istringstream bad_number(sweep_csv_header(1) + "\n0,0,1,x,1,,,,,,0\n");
  EXPECT_THROW((void)read_sweep_csv(bad_number), ConfigError);
  std::istringstream empty("");
  EXPECT_THROW((void)read_sweep_csv(empty), ConfigError);
}

TEST(Summary, MatchesRecomputation) {
  std::vector<SweepRecord> rows;
  const double md[] = {1.1, 1.3, 1.2};
  const double cost[] = {5.0, 7.5, 6.0};
  for (int i = 0; i < 3; ++i) {
    SweepRecord r = sample_row();
    r.b = 0.2;
    r.trial = i;
    r.disk_margin = md[i];
    r.cost = cost[i];
    r.reward = -cost[i];
    rows.push_back(r);
  }
  SweepRecord failed = sample_row();
  failed.b = 0.2;
  failed.reward = -kInf;
  failed.cost = kInf;
  failed.disk_margin.reset();
  rows.push_back(failed);
  SweepRecord other = sample_row();
  other.b = 0.0;
  rows.push_back(other);

  const std::vector<LevelSummary> s = summarize(rows);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].b, 0.0);
  EXPECT_EQ(s[1].trials, 4);
  EXPECT_EQ(s[1].finite, 3);
  EXPECT_NEAR(*s[1].md_mean, 1.2, 1e-12);
  EXPECT_NEAR(*s[1].md_std, 0.1, 1e-12);
  EXPECT_NEAR(*s[1].cost_mean, 6.166666666666667, 1e-12);
  EXPECT_NEAR(*s[1].cost_std, std::sqrt((1.361111111111111 + 1.7777777777777 + 0.0277777777777) / 2.0), 1e-9);
  EXPECT_EQ(*s[0].md_std, 0.0);

  std::ostringstream out;
  write_summary_csv(out, s, LqgReference{137281.0, 1.5});
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("kind,b,trials,finite,md_mean,md_std,cost_mean,cost_std\n", 0), 0u);
  EXPECT_NE(text.find("\nlqg,,,,1.5,,137281,\n"), std::string::npos) << text;
}

TEST(Summary, PathNextToSweep) {
  EXPECT_EQ(summary_path_for("out/sweep.csv"), "out/sweep.summary.csv");
  EXPECT_EQ(summary_path_for("sweep"), "sweep.summary.csv");
}

TEST(RunTrials, RowsAndDeterminism) {
  const ExperimentConfig c = tiny_doyle();
  const std::vector<SweepRecord> a = run_trials(c, {0.0, 0.05}, 2, 11);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].b, 0.0);
  EXPECT_EQ(a[1].trial, 1);
  EXPECT_EQ(a[1].seed, trial_seed(11, 1));
  EXPECT_EQ(a[2].b, 0.05);
  for (const SweepRecord& r : a) {
    EXPECT_EQ(r.theta.size(), 4u);
    if (std::isfinite(r.reward)) {
      EXPECT_EQ(r.cost, -r.reward);
      EXPECT_TRUE(r.disk_margin.has_value());
    } else {
      EXPECT_FALSE(r.disk_margin.has_value());
    }
  }
  EXPECT_EQ(run_trials(c, {0.0, 0.05}, 2, 11), a);
}

TEST(Commands, SingleCellSweepEqualsTrain) {
  const ExperimentConfig c = tiny_doyle();
  CommandOptions o;
  o.seed = 4;
  o.levels = std::vector<double>{0.0};
  o.trials = 1;
  std::ostringstream train_out;
  std::ostringstream sweep_out;
  EXPECT_EQ(cmd_train(c, o, train_out), kExitOk);
  EXPECT_EQ(cmd_sweep(c, o, sweep_out), kExitOk);
  EXPECT_EQ(train_out.str(), sweep_out.str());
}

TEST(Commands, SweepWritesSummaryFile) {
  const fs::path dir = fs::temp_directory_path() / "lqgrl_sweep_test";
  fs::create_directories(dir);
  const ExperimentConfig c = tiny_doyle();
  CommandOptions o;
  o.levels = std::vector<double>{0.0, 0.05};
  o.trials = 2;
  o.quiet = true;
  o.out_path = (dir / "sweep.csv").string();
  std::ostringstream out;
  ASSERT_EQ(cmd_sweep(c, o, out), kExitOk);
  EXPECT_TRUE(out.str().empty());
  std::ifstream rows_in(*o.out_path);
  const std::vector<SweepRecord> rows = read_sweep_csv(rows_in);
  EXPECT_EQ(rows.size(), 4u);
  std::ostringstream expected;
  write_summary_csv(expected, summarize(rows), lqg_reference(c.plant));
  EXPECT_EQ(slurp(dir / "sweep.summary.csv"), expected.str());
  fs::remove_all(dir);
}

TEST(Commands, TrainWithoutStabilizingPolicy) {
  ExperimentConfig c = tiny_doyle();
  c.train.hypercube = Hypercube::point(Vector::Zero(4));
  CommandOptions o;
  o.trials = 2;
  o.quiet = true;
  std::ostringstream out;
  EXPECT_EQ(cmd_train(c, o, out), kExitNoStabilizingPolicy);
  EXPECT_NE(out.str().find("-inf,inf,,,,,,0,0,0,0"), std::string::npos);
}

TEST(Commands, MarginsOfPublishedPolicies) {
  const ExperimentConfig c = preset_config("doyle");
  CommandOptions o;
  o.theta = std::vector<double>{-0.1095, -0.0491, -21.02, 23.21};
  std::ostringstream out;
  EXPECT_EQ(cmd_margins(c, o, out), kExitOk);
  EXPECT_NE(out.str().find("disk_margin: 1.000"), std::string::npos) << out.str();
  o.theta = std::vector<double>{0, 0, 0, 0};
  EXPECT_EQ(cmd_margins(c, o, out), kExitUnstableNominal);
  o.theta = std::vector<double>{1, 2};
  EXPECT_THROW((void)cmd_margins(c, o, out), ConfigError);
  o.theta.reset();
  EXPECT_THROW((void)cmd_margins(c, o, out), ConfigError);
}

TEST(Commands, LqgReport) {
  std::ostringstream out;
  EXPECT_EQ(cmd_lqg(preset_config("doyle"), CommandOptions{}, out), kExitOk);
  EXPECT_NE(out.str().find("J_LQG: 137281."), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("theta_lqg: [-0.109"), std::string::npos) << out.str();
  std::ostringstream flex;
  EXPECT_EQ(cmd_lqg(preset_config("flexible"), CommandOptions{}, flex), kExitOk);
  EXPECT_NE(flex.str().find("disk_margin: 1.009"), std::string::npos) << flex.str();
}

TEST(Commands, SimulateAgreesWithExactValue) {
  CommandOptions o;
  o.horizon = 20000;
  o.episodes = 10;
  std::ostringstream out;
  EXPECT_EQ(cmd_simulate(preset_config("flexible"), o, out), kExitOk);
  EXPECT_NE(out.str().find("exact_reward: -0.0071671"), std::string::npos) << out.str();
}

int run_cli(const std::string& args, const fs::path& stdout_path = "/dev/null") {
  const std::string cmd = std::string(LQGRL_CLI_PATH) + " " + args + " > " +
                          stdout_path.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  const fs::path dir = fs::temp_directory_path() / "lqgrl_cli_test";
  fs::create_directories(dir);
  EXPECT_EQ(run_cli("lqg --preset doyle"), 0);
  EXPECT_EQ(run_cli("lqg --preset unknown"), 2);
  EXPECT_EQ(run_cli("lqg --bogus-flag"), 2);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("margins --preset doyle --theta 0,0,0,0"), 4);
  EXPECT_EQ(run_cli("margins --preset doyle --theta 1,2"), 2);

  std::ofstream(dir / "bad_r.json") << R"({"preset": "doyle", "plant": {"nx": 1, "nu": 1,
    "nw": 1, "ny": 1, "A": [1], "B": [1], "Bw": [1], "C": [1], "Q": [1], "R": [-1],
    "W": [1], "V": [1]}})";
  EXPECT_EQ(run_cli("lqg --config " + (dir / "bad_r.json").string()), 2);
  std::ofstream(dir / "zero.json") << R"({"preset": "doyle",
    "train": {"lower": [0, 0, 0, 0], "upper": [0, 0, 0, 0], "n_init": 3, "n_steps": 2}})";
  EXPECT_EQ(run_cli("train --config " + (dir / "zero.json").string()), 3);
  fs::remove_all(dir);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const fs::path dir = fs::temp_directory_path() / "lqgrl_cli_repeat";
  fs::create_directories(dir);
  const std::string args = "train --preset doyle --n-init 300 --n-steps 10 --trials 2 --seed 8 --out ";
  ASSERT_EQ(run_cli(args + (dir / "a.csv").string()), 0);
  ASSERT_EQ(run_cli(args + (dir / "b.csv").string() + " --threads 2"), 0);
  EXPECT_FALSE(slurp(dir / "a.csv").empty());
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace lqgrl
