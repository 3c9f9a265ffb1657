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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lqgrl/margins.hpp"
#include "lqgrl/plant.hpp"
#include "lqgrl/policy.hpp"
#include "lqgrl/trainer.hpp"

namespace lqgrl {

// Process exit codes shared by the CLI commands.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitNoStabilizingPolicy = 3,
  kExitUnstableNominal = 4,
};

struct ExperimentConfig {
  std::string name;
  PlantModel plant;
  PolicyForm form;
  TrainConfig train;
  std::vector<double> sweep_levels{0.0};
  int trials = 1;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Built-in "doyle" and "flexible" configurations. Throws ConfigError for an
// unknown name.
[[nodiscard]] ExperimentConfig preset_config(std::string_view name);

// JSON configuration; see README for the schema. A "preset" key selects a
// base configuration that the remaining sections override. Parse errors
// report line and column; schema errors report the field path.
[[nodiscard]] ExperimentConfig parse_config(std::string_view json_text);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

// One row of a training or sweep output: the best policy of one training
// run at perturbation level b, with its nominal margins.
struct SweepRecord {
  double b = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double reward = 0.0;  // J; -inf when no stabilizing policy was found
  double cost = 0.0;    // -J
  std::optional<double> disk_margin;
  std::optional<double> disk_alpha;
  std::optional<double> gain_lo;
  std::optional<double> gain_hi;
  std::optional<double> phase_deg;
  std::vector<double> theta;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

struct LevelSummary {
  double b = 0.0;
  int trials = 0;
  int finite = 0;
  std::optional<double> md_mean;
  std::optional<double> md_std;
  std::optional<double> cost_mean;
  std::optional<double> cost_std;
};

struct LqgReference {
  double cost = 0.0;
  std::optional<double> disk_margin;
};

// 17 significant digits; "inf"/"-inf" for infinities.
[[nodiscard]] std::string format_double(double value);
[[nodiscard]] double parse_double(std::string_view text);

[[nodiscard]] std::string sweep_csv_header(std::size_t n_params);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& rows,
                     std::size_t n_params);
// Throws ConfigError on a malformed header or row.
[[nodiscard]] std::vector<SweepRecord> read_sweep_csv(std::istream& in);

// Per-level mean and sample standard deviation over rows with a finite cost
// and margin, in ascending b.
[[nodiscard]] std::vector<LevelSummary> summarize(
    const std::vector<SweepRecord>& rows);
void write_summary_csv(std::ostream& out,
                       const std::vector<LevelSummary>& levels,
                       const std::optional<LqgReference>& lqg);

// "<stem>.summary.csv" next to the sweep output.
[[nodiscard]] std::string summary_path_for(const std::string& sweep_path);

// Seed of trial i under master seed s.
[[nodiscard]] inline std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return seed + static_cast<std::uint64_t>(trial);
}

// Train once per (level, trial) and analyze the nominal margins of each best
// policy. Rows come back sorted by (b, trial).
[[nodiscard]] std::vector<SweepRecord> run_trials(
    const ExperimentConfig& config, const std::vector<double>& levels,
    int trials, std::uint64_t seed);

[[nodiscard]] std::optional<LqgReference> lqg_reference(
    const PlantModel& plant);

// Subcommand bodies; each returns an ExitCode.
struct CommandOptions {
  std::uint64_t seed = 1;
  std::optional<std::string> out_path;
  std::optional<std::vector<double>> levels;
  std::optional<int> trials;
  std::optional<std::vector<double>> theta;
  long horizon = 100000;
  int episodes = 50;
  bool quiet = false;
};

int cmd_lqg(const ExperimentConfig& config, const CommandOptions& options,
            std::ostream& out);
int cmd_train(const ExperimentConfig& config, const CommandOptions& options,
              std::ostream& out);
int cmd_sweep(const ExperimentConfig& config, const CommandOptions& options,
              std::ostream& out);
int cmd_margins(const ExperimentConfig& config, const CommandOptions& options,
                std::ostream& out);
int cmd_simulate(const ExperimentConfig& config, const CommandOptions& options,
                 std::ostream& out);

// Numbers separated by commas and/or whitespace.
[[nodiscard]] std::vector<double> parse_number_list(std::string_view text);

}  // namespace lqgrl
