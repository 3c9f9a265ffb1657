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

// Command-line driver: lqg | train | sweep | margins | simulate.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lqgrl/errors.hpp"
#include "lqgrl/experiment.hpp"

namespace {

struct Args {
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 1;
  std::string out;
  std::string levels;
  int trials = 0;
  std::string theta;
  std::string theta_file;
  long horizon = 100000;
  int episodes = 50;
  int n_init = 0;
  int n_steps = 0;
  int threads = 0;
  bool quiet = false;
};

lqgrl::ExperimentConfig resolve_config(const Args& args) {
  if (!args.config_path.empty() && !args.preset.empty()) {
    throw lqgrl::ConfigError("--config and --preset are mutually exclusive");
  }
  lqgrl::ExperimentConfig config =
      args.config_path.empty()
          ? lqgrl::preset_config(args.preset.empty() ? "doyle" : args.preset)
          : lqgrl::load_config(args.config_path);
  if (args.n_init > 0) config.train.n_init = args.n_init;
  if (args.n_steps > 0) config.train.n_steps = args.n_steps;
  if (args.threads > 0) config.train.threads = args.threads;
  config.validate();
  return config;
}

lqgrl::CommandOptions resolve_options(const Args& args) {
  lqgrl::CommandOptions o;
  o.seed = args.seed;
  if (!args.out.empty()) o.out_path = args.out;
  if (!args.levels.empty()) o.levels = lqgrl::parse_number_list(args.levels);
  if (args.trials > 0) o.trials = args.trials;
  if (!args.theta.empty() && !args.theta_file.empty()) {
    throw lqgrl::ConfigError("--theta and --theta-file are mutually exclusive");
  }
  if (!args.theta.empty()) o.theta = lqgrl::parse_number_list(args.theta);
  if (!args.theta_file.empty()) {
    std::ifstream in(args.theta_file);
    if (!in) throw lqgrl::ConfigError("cannot read " + args.theta_file);
    std::ostringstream text;
    text << in.rdbuf();
    o.theta = lqgrl::parse_number_list(text.str());
  }
  o.horizon = args.horizon;
  o.episodes = args.episodes;
  o.quiet = args.quiet;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust LQG policy search: synthesis, training, sweeps, margins"};
  app.require_subcommand(1);
  Args args;

  auto add_common = [&args](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON experiment config");
    sub->add_option("--preset", args.preset, "doyle or flexible (default doyle)");
    sub->add_option("--seed", args.seed, "master seed");
    sub->add_option("--out", args.out, "output file");
    sub->add_flag("--quiet", args.quiet, "suppress progress text");
  };
  auto add_training = [&args](CLI::App* sub) {
    sub->add_option("--b", args.levels, "perturbation level(s), comma separated");
    sub->add_option("--trials", args.trials, "independent trials per level");
    sub->add_option("--n-init", args.n_init, "initializations per trial");
    sub->add_option("--n-steps", args.n_steps, "ascent steps per initialization");
    sub->add_option("--threads", args.threads, "worker threads");
  };
  auto add_theta = [&args](CLI::App* sub) {
    sub->add_option("--theta", args.theta, "policy parameters, comma separated");
    sub->add_option("--theta-file", args.theta_file, "file with policy parameters");
  };

  CLI::App* lqg = app.add_subcommand("lqg", "LQG synthesis, cost and margins");
  add_common(lqg);
  CLI::App* train = app.add_subcommand("train", "train at one perturbation level");
  add_common(train);
  add_training(train);
  CLI::App* sweep = app.add_subcommand("sweep", "train across perturbation levels");
  add_common(sweep);
  add_training(sweep);
  CLI::App* margins = app.add_subcommand("margins", "stability margins of a policy");
  add_common(margins);
  add_theta(margins);
  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo reward of a policy");
  add_common(simulate);
  add_theta(simulate);
  simulate->add_option("--b", args.levels, "fixed input perturbation delta");
  simulate->add_option("--horizon", args.horizon, "rollout length");
  simulate->add_option("--episodes", args.episodes, "number of rollouts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? lqgrl::kExitOk : lqgrl::kExitConfigError;
  }

  try {
    const lqgrl::ExperimentConfig config = resolve_config(args);
    const lqgrl::CommandOptions options = resolve_options(args);
    if (lqg->parsed()) return lqgrl::cmd_lqg(config, options, std::cout);
    if (train->parsed()) return lqgrl::cmd_train(config, options, std::cout);
    if (sweep->parsed()) return lqgrl::cmd_sweep(config, options, std::cout);
    if (margins->parsed()) return lqgrl::cmd_margins(config, options, std::cout);
    return lqgrl::cmd_simulate(config, options, std::cout);
  } catch (const lqgrl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lqgrl::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
