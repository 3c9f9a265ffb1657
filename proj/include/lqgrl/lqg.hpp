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

#include "lqgrl/linalg.hpp"
#include "lqgrl/plant.hpp"

namespace lqgrl {

// Model-based LQG solution: Kalman predictor plus LQR state feedback,
//   xhat_{t+1} = A xhat_t + B u_t + L (y_t - C xhat_t),  u_t = -K xhat_t.
struct LqgController {
  Matrix K;    // n_u x n_x
  Matrix L;    // n_x x n_y
  Matrix P_c;  // control Riccati solution
  Matrix P_e;  // estimation Riccati solution

  // (A - BK - LC, L, -K), no feedthrough.
  [[nodiscard]] LtiController realization(const PlantModel& plant) const;
};

// Throws NoStabilizingSolution when either Riccati equation has no
// stabilizing solution.
[[nodiscard]] LqgController lqg_gains(const PlantModel& plant);

// Steady-state average cost lim (1/N) E[sum x'Qx + u'Ru] of the plant in
// feedback with `controller`. Throws UnstableLoop if the loop is not Schur.
[[nodiscard]] double lqg_cost(const PlantModel& plant,
                              const LtiController& controller);

// Parameters of the Companion2 realization with the same transfer function
// as a second-order SISO controller, found by matching numerator and
// denominator coefficients. Throws NotRepresentable for other orders,
// non-SISO or biproper controllers, and uncontrollable realizations.
[[nodiscard]] Vector to_companion(const LtiController& controller);

}  // namespace lqgrl
