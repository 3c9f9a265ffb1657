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

#include "lqgrl/lqg.hpp"

#include <string>

#include "lqgrl/errors.hpp"
#include "lqgrl/policy.hpp"

namespace lqgrl {

LtiController LqgController::realization(const PlantModel& plant) const {
  return {plant.A - plant.B * K - L * plant.C, L, -K,
          Matrix::Zero(plant.input_dim(), plant.output_dim())};
}

LqgController lqg_gains(const PlantModel& plant) {
  plant.validate();
  LqgController out;
  out.P_c = solve_dare(plant.A, plant.B, plant.Q, plant.R);
  out.K = dare_gain(plant.A, plant.B, plant.R, out.P_c);

  // Filter Riccati equation is the dual problem (A', C', Bw W Bw', V).
  out.P_e = solve_dare(plant.A.transpose(), plant.C.transpose(),
                       plant.state_noise(), plant.V);
  const Matrix S = plant.C * out.P_e * plant.C.transpose() + plant.V;
  out.L = S.ldlt()
              .solve((plant.A * out.P_e * plant.C.transpose()).transpose())
              .transpose();
  return out;
}

double lqg_cost(const PlantModel& plant, const LtiController& controller) {
  const ClosedLoop loop =
      assemble(plant, controller, zero_perturbation(plant));
  const StabilityVerdict verdict = is_schur_stable(loop.A_bar);
  if (!verdict.stable) {
    throw UnstableLoop("lqg_cost: closed loop spectral radius " +
                       std::to_string(verdict.spectral_radius));
  }
  const Matrix X = solve_dlyap(loop.A_bar, loop.W_bar);
  return frobenius_inner(loop.M, X);
}

Vector to_companion(const LtiController& controller) {
  if (controller.order() != 2 || controller.B.cols() != 1 ||
      controller.C.rows() != 1) {
    throw NotRepresentable(
        "to_companion: only second-order SISO controllers have a Companion2 "
        "realization (order " +
        std::to_string(controller.order()) + ")");
  }
  if (!controller.strictly_proper()) {
    throw NotRepresentable("to_companion: controller has direct feedthrough");
  }
  const Matrix& A = controller.A;
  const Matrix& B = controller.B;
  const Matrix& C = controller.C;

  Matrix ctrb(2, 2);
  ctrb << B, A * B;
  Eigen::JacobiSVD<Matrix> svd(ctrb);
  const Vector sv = svd.singularValues();
  if (!(sv(1) > 1e-12 * sv(0))) {
    throw NotRepresentable(
        "to_companion: realization is uncontrollable, no state transformation "
        "exists");
  }

  // C adj(zI - A) B = (CB) z + C (A - tr(A) I) B,  det(zI - A) = z^2 - tr z + det.
  const double trace = A.trace();
  const double det = A.determinant();
  const double n1 = (C * B)(0, 0);
  const double n0 = (C * (A - trace * Matrix::Identity(2, 2)) * B)(0, 0);

  Vector theta(4);
  theta << -det, trace, n1, n0 + trace * n1;
  return theta;
}

}  // namespace lqgrl
