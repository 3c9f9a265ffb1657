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
#include <limits>
#include <optional>
#include <vector>

#include "lqgrl/linalg.hpp"
#include "lqgrl/plant.hpp"
#include "lqgrl/policy.hpp"

namespace lqgrl {

// Expected average reward (negative LQG cost) of a policy. Unstable loops
// carry value -inf and no gradient.
struct RewardEval {
  double value = -std::numeric_limits<double>::infinity();
  std::optional<Vector> gradient;
  bool stable = false;

  [[nodiscard]] static RewardEval unstable() { return {}; }
};

// Multiplicative input perturbation Delta = 1 + delta, with each delta_i
// uniform on [-b, b].
struct PerturbationSpec {
  double b = 0.0;
  int quadrature_order = 7;
  // Channel count above which the tensor-product rule is replaced by
  // Monte-Carlo sampling of delta.
  int max_tensor_channels = 2;
  int mc_fallback_samples = 256;
  std::uint64_t mc_seed = 0x9e3779b97f4a7c15ULL;

  // Throws std::invalid_argument unless b >= 0, the order is odd and >= 1,
  // and the sample count is >= 1.
  void validate() const;
};

struct PerturbationNode {
  Vector delta;
  double weight = 0.0;
};

// Expectation nodes over delta; weights sum to one. b = 0 yields the single
// node delta = 0.
[[nodiscard]] std::vector<PerturbationNode> perturbation_nodes(
    const PerturbationSpec& spec, Eigen::Index input_dim);

// -trace(M X) with X the closed-loop steady-state covariance, plus the exact
// gradient when requested. Instability is reported in-band.
[[nodiscard]] RewardEval exact_reward(const PlantModel& plant,
                                      const PolicyParams& policy,
                                      const Vector& delta,
                                      bool with_gradient = false);

// Throws UnstableLoop when the perturbed loop is not Schur.
[[nodiscard]] Vector exact_gradient(const PlantModel& plant,
                                    const PolicyParams& policy,
                                    const Vector& delta);

// Expectation of exact_reward over the perturbation distribution. Any
// unstable node makes the whole evaluation unstable. b = 0 returns
// exact_reward at delta = 0 unchanged.
[[nodiscard]] RewardEval averaged_reward(const PlantModel& plant,
                                         const PolicyParams& policy,
                                         const PerturbationSpec& spec,
                                         bool with_gradient = false);

struct McEstimate {
  double mean = 0.0;
  // Standard error of the mean across episodes; +inf for a single episode.
  double std_error = 0.0;
  int episodes = 0;
  long horizon = 0;
};

// Sample mean over independent episodes of (1/horizon) sum_t r(x_t, u_t),
// starting from zero state, with Gaussian process and sensor noise. Episode
// e draws from its own generator seeded by (seed, e). Throws RolloutOverflow
// when a state norm exceeds 1e12.
[[nodiscard]] McEstimate mc_reward(const PlantModel& plant,
                                   const LtiController& controller,
                                   const Vector& delta, long horizon,
                                   int episodes, std::uint64_t seed);
[[nodiscard]] McEstimate mc_reward(const PlantModel& plant,
                                   const PolicyParams& policy,
                                   const Vector& delta, long horizon,
                                   int episodes, std::uint64_t seed);

// Exact expectation of the finite-horizon average that mc_reward samples:
// -(1/N) sum_{t<N} trace(M X_t), X_0 = 0, X_{t+1} = A X_t A' + W.
[[nodiscard]] double finite_horizon_reward(const PlantModel& plant,
                                           const LtiController& controller,
                                           const Vector& delta, long horizon);

}  // namespace lqgrl
