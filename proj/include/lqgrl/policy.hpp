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

#include <string>
#include <vector>

#include "lqgrl/linalg.hpp"
#include "lqgrl/plant.hpp"

namespace lqgrl {

enum class PolicyKind {
  // A_K = [0 t1; 1 t2], B_K = [1; 0], C_K = [t3 t4].
  Companion2,
  // Shift structure with bottom row [t1 .. tn], B_K = e_n,
  // C_K = [t_{n+1} .. t_{2n}].
  CtrbCanonical,
};

struct PolicyForm {
  PolicyKind kind = PolicyKind::Companion2;
  int order = 2;

  [[nodiscard]] static PolicyForm companion2() {
    return {PolicyKind::Companion2, 2};
  }
  [[nodiscard]] static PolicyForm ctrb_canonical(int order) {
    return {PolicyKind::CtrbCanonical, order};
  }

  [[nodiscard]] Eigen::Index param_count() const { return 2 * order; }
  [[nodiscard]] std::string name() const;

  friend bool operator==(const PolicyForm&, const PolicyForm&) = default;
};

struct PolicyParams {
  PolicyForm form;
  Vector theta;

  // Throws DimensionMismatch on a length mismatch, InvalidModel on
  // non-finite entries or an order < 1.
  void validate() const;
};

[[nodiscard]] LtiController realize(const PolicyParams& policy);

// Partial derivatives of (A_K, B_K, C_K) with respect to each parameter.
// Both forms are affine in theta, so these do not depend on theta.
[[nodiscard]] std::vector<LtiController> realize_jacobian(const PolicyForm& form);

// Plant in feedback with a controller, driven by white noise:
//   xbar_{t+1} = A_bar xbar_t + wbar_t,  E[wbar wbar'] = W_bar,
// with the per-step cost xbar' M xbar and xbar = [x; z].
struct ClosedLoop {
  Matrix A_bar;
  Matrix W_bar;
  Matrix M;
  Vector delta;
};

// Closed loop with multiplicative input perturbation diag(1 + delta) between
// the controller output and the plant input. The cost penalizes the
// commanded input u = C_K z, so M = blockdiag(Q, C_K' R C_K). Requires a
// strictly proper controller and delta_i > -1.
[[nodiscard]] ClosedLoop assemble(const PlantModel& plant,
                                  const LtiController& controller,
                                  const Vector& delta);
[[nodiscard]] ClosedLoop assemble(const PlantModel& plant,
                                  const PolicyParams& policy,
                                  const Vector& delta);

// Noise-free closed-loop state matrix with arbitrary per-channel input gains
// (any sign). Supports controller feedthrough D.
[[nodiscard]] Matrix closed_loop_matrix(const PlantModel& plant,
                                        const LtiController& controller,
                                        const Vector& input_gain);

[[nodiscard]] inline Vector zero_perturbation(const PlantModel& plant) {
  return Vector::Zero(plant.input_dim());
}

}  // namespace lqgrl
