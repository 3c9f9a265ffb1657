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
#include <vector>

#include "lqgrl/linalg.hpp"
#include "lqgrl/plant.hpp"
#include "lqgrl/policy.hpp"
#include "lqgrl/reward.hpp"

namespace lqgrl {

struct Hypercube {
  Vector lower;
  Vector upper;

  // Throws DimensionMismatch or std::invalid_argument (lower > upper).
  void validate(Eigen::Index dim) const;
  [[nodiscard]] static Hypercube point(const Vector& theta) {
    return {theta, theta};
  }
};

// Step length control for the gradient ascent. Every step moves along the
// normalized gradient; the trial length is `eta` on the first step and the
// Barzilai-Borwein (short) estimate afterwards, halved until the reward does
// not decrease and the loop stays stable.
struct StepPolicy {
  double eta = 0.1;
  int max_halvings = 30;
  double min_gradient_norm = 1e-14;
  bool barzilai_borwein = true;
};

struct TrainConfig {
  Hypercube hypercube;
  int n_init = 500;
  int n_steps = 100;
  StepPolicy step;
  PerturbationSpec perturbation;
  std::uint64_t seed = 1;
  // Worker threads for the initializations; results do not depend on it.
  int threads = 1;

  void validate(Eigen::Index dim) const;
};

struct AscentResult {
  Vector theta;
  double reward = -std::numeric_limits<double>::infinity();
  bool stable = false;
  int steps = 0;
  // Reward after each accepted step, starting with the initial reward.
  std::vector<double> history;
};

struct InitTrace {
  Vector theta_initial;
  Vector theta_final;
  double initial_reward = -std::numeric_limits<double>::infinity();
  double final_reward = -std::numeric_limits<double>::infinity();
  bool stable = false;
  int steps = 0;
};

struct TrainResult {
  Vector theta_opt;
  double reward_opt = -std::numeric_limits<double>::infinity();
  // Index of the winning initialization, -1 when none was stable.
  int best_index = -1;
  std::vector<InitTrace> traces;
  std::uint64_t seed = 0;

  [[nodiscard]] bool found_stable() const { return best_index >= 0; }
};

// Gradient ascent on averaged_reward from theta0. An unstable start is
// returned untouched with reward -inf.
[[nodiscard]] AscentResult ascend(const PlantModel& plant,
                                  const PolicyForm& form, const Vector& theta0,
                                  const TrainConfig& config);

// Initial point i of a run, drawn uniformly from the hypercube with a
// generator seeded by (seed, i).
[[nodiscard]] Vector sample_initial(const Hypercube& cube, std::uint64_t seed,
                                    int index);

// Gradient ascent with random initialization: ascend from n_init uniform
// hypercube samples and keep the best final policy (ties go to the lowest
// index).
[[nodiscard]] TrainResult train(const PlantModel& plant,
                                const PolicyForm& form,
                                const TrainConfig& config);

}  // namespace lqgrl
