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

#include "lqgrl/policy.hpp"

#include <string>

#include "lqgrl/errors.hpp"

namespace lqgrl {
namespace {

void check_conforming(const PlantModel& plant, const LtiController& k) {
  const Eigen::Index nk = k.order();
  if (k.A.cols() != nk || k.B.rows() != nk || k.C.cols() != nk ||
      k.B.cols() != plant.output_dim() || k.C.rows() != plant.input_dim()) {
    throw DimensionMismatch("controller does not conform with the plant");
  }
  if (k.D.size() != 0 &&
      (k.D.rows() != plant.input_dim() || k.D.cols() != plant.output_dim())) {
    throw DimensionMismatch("controller feedthrough does not conform");
  }
}

}  // namespace

std::string PolicyForm::name() const {
  switch (kind) {
    case PolicyKind::Companion2:
      return "companion2";
    case PolicyKind::CtrbCanonical:
      return "ctrb_canonical(" + std::to_string(order) + ")";
  }
  return "unknown";
}

void PolicyParams::validate() const {
  if (form.order < 1 ||
      (form.kind == PolicyKind::Companion2 && form.order != 2)) {
    throw InvalidModel("policy form " + form.name() + " has an invalid order");
  }
  if (theta.size() != form.param_count()) {
    throw DimensionMismatch("policy " + form.name() + " expects " +
                            std::to_string(form.param_count()) +
                            " parameters, got " + std::to_string(theta.size()));
  }
  if (!theta.allFinite()) {
    throw InvalidModel("policy parameters must be finite");
  }
}

LtiController realize(const PolicyParams& policy) {
  policy.validate();
  const int n = policy.form.order;
  const Vector& t = policy.theta;
  LtiController k{Matrix::Zero(n, n), Matrix::Zero(n, 1), Matrix::Zero(1, n),
                  Matrix::Zero(1, 1)};
  switch (policy.form.kind) {
    case PolicyKind::Companion2:
      k.A << 0.0, t(0), 1.0, t(1);
      k.B << 1.0, 0.0;
      k.C << t(2), t(3);
      break;
    case PolicyKind::CtrbCanonical:
      for (int i = 0; i + 1 < n; ++i) {
        k.A(i, i + 1) = 1.0;
      }
      k.A.row(n - 1) = t.head(n).transpose();
      k.B(n - 1, 0) = 1.0;
      k.C.row(0) = t.tail(n).transpose();
      break;
  }
  return k;
}

std::vector<LtiController> realize_jacobian(const PolicyForm& form) {
  const int n = form.order;
  std::vector<LtiController> parts;
  parts.reserve(form.param_count());
  for (Eigen::Index p = 0; p < form.param_count(); ++p) {
    LtiController d{Matrix::Zero(n, n), Matrix::Zero(n, 1), Matrix::Zero(1, n),
                    Matrix::Zero(1, 1)};
    switch (form.kind) {
      case PolicyKind::Companion2:
        if (p == 0) d.A(0, 1) = 1.0;
        if (p == 1) d.A(1, 1) = 1.0;
        if (p >= 2) d.C(0, p - 2) = 1.0;
        break;
      case PolicyKind::CtrbCanonical:
        if (p < n) {
          d.A(n - 1, p) = 1.0;
        } else {
          d.C(0, p - n) = 1.0;
        }
        break;
    }
    parts.push_back(std::move(d));
  }
  return parts;
}

Matrix closed_loop_matrix(const PlantModel& plant,
                          const LtiController& controller,
                          const Vector& input_gain) {
  check_conforming(plant, controller);
  if (input_gain.size() != plant.input_dim()) {
    throw DimensionMismatch("input gain length must equal the input dimension");
  }
  const Eigen::Index nx = plant.state_dim();
  const Eigen::Index nk = controller.order();
  const Matrix BG = plant.B * input_gain.asDiagonal();
  Matrix Abar(nx + nk, nx + nk);
  Abar.topLeftCorner(nx, nx) = plant.A;
  if (!controller.strictly_proper()) {
    Abar.topLeftCorner(nx, nx) += BG * controller.D * plant.C;
  }
  Abar.topRightCorner(nx, nk) = BG * controller.C;
  Abar.bottomLeftCorner(nk, nx) = controller.B * plant.C;
  Abar.bottomRightCorner(nk, nk) = controller.A;
  return Abar;
}

ClosedLoop assemble(const PlantModel& plant, const LtiController& controller,
                    const Vector& delta) {
  check_conforming(plant, controller);
  if (!controller.strictly_proper()) {
    throw InvalidModel(
        "assemble: controllers with direct feedthrough are not supported");
  }
  if (delta.size() != plant.input_dim()) {
    throw DimensionMismatch("assemble: perturbation length must equal n_u");
  }
  if ((delta.array() <= -1.0).any()) {
    throw InvalidModel("assemble: input perturbation must satisfy delta > -1");
  }
  const Eigen::Index nx = plant.state_dim();
  const Eigen::Index nk = controller.order();

  ClosedLoop loop;
  loop.delta = delta;
  loop.A_bar = closed_loop_matrix(plant, controller,
                                  Vector::Ones(delta.size()) + delta);
  loop.W_bar = Matrix::Zero(nx + nk, nx + nk);
  loop.W_bar.topLeftCorner(nx, nx) = plant.state_noise();
  loop.W_bar.bottomRightCorner(nk, nk) =
      controller.B * plant.V * controller.B.transpose();
  loop.M = Matrix::Zero(nx + nk, nx + nk);
  loop.M.topLeftCorner(nx, nx) = plant.Q;
  loop.M.bottomRightCorner(nk, nk) =
      controller.C.transpose() * plant.R * controller.C;
  return loop;
}

ClosedLoop assemble(const PlantModel& plant, const PolicyParams& policy,
                    const Vector& delta) {
  return assemble(plant, realize(policy), delta);
}

}  // namespace lqgrl
