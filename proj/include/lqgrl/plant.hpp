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

#include "lqgrl/linalg.hpp"

namespace lqgrl {

// Discrete-time linear-Gaussian plant with quadratic cost weights:
//
//   x_{t+1} = A x_t + B u_t + Bw w_t,   w_t ~ N(0, W)
//   y_t     = C x_t + v_t,              v_t ~ N(0, V)
//   cost    = x' Q x + u' R u per step.
struct PlantModel {
  Matrix A;
  Matrix B;
  Matrix Bw;
  Matrix C;
  Matrix Q;
  Matrix R;
  Matrix W;
  Matrix V;

  [[nodiscard]] Eigen::Index state_dim() const { return A.rows(); }
  [[nodiscard]] Eigen::Index input_dim() const { return B.cols(); }
  [[nodiscard]] Eigen::Index noise_dim() const { return Bw.cols(); }
  [[nodiscard]] Eigen::Index output_dim() const { return C.rows(); }

  // Process-noise covariance as seen by the state, Bw W Bw'.
  [[nodiscard]] Matrix state_noise() const { return Bw * W * Bw.transpose(); }

  // Throws InvalidModel naming the offending field (dimensions, symmetry to
  // 1e-12, Q >= 0, R > 0, W > 0, V > 0).
  void validate() const;
};

// Strictly proper (delayed-measurement) output-feedback controller
//
//   z_{t+1} = A z_t + B y_t,   u_t = C z_t + D y_t.
//
// D is zero for every controller the reward oracle accepts; a static or
// biproper D is only meaningful to the margin analysis.
struct LtiController {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;

  [[nodiscard]] Eigen::Index order() const { return A.rows(); }
  [[nodiscard]] bool strictly_proper() const {
    return D.size() == 0 || D.isZero(0.0);
  }

  // Transfer-function preserving change of coordinates z -> T z.
  [[nodiscard]] LtiController transformed(const Matrix& T) const;
};

// Static output feedback u = D y expressed as an order-0 controller.
[[nodiscard]] LtiController static_gain(const Matrix& D);

}  // namespace lqgrl
