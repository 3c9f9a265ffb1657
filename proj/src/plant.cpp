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

#include "lqgrl/plant.hpp"

#include <string>

#include "lqgrl/errors.hpp"

namespace lqgrl {
namespace {

constexpr double kSymmetryTol = 1e-12;

void check_shape(const Matrix& M, Eigen::Index rows, Eigen::Index cols,
                 const std::string& name) {
  if (M.rows() != rows || M.cols() != cols) {
    throw InvalidModel(name + ": expected " + std::to_string(rows) + "x" +
                       std::to_string(cols) + ", got " +
                       std::to_string(M.rows()) + "x" +
                       std::to_string(M.cols()));
  }
  if (!M.allFinite()) {
    throw InvalidModel(name + ": entries must be finite");
  }
}

void check_symmetric(const Matrix& M, const std::string& name) {
  if ((M - M.transpose()).cwiseAbs().maxCoeff() >
      kSymmetryTol * (1.0 + M.cwiseAbs().maxCoeff())) {
    throw InvalidModel(name + ": must be symmetric");
  }
}

double min_eigenvalue(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(M),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void check_definite(const Matrix& M, bool strict, const std::string& name) {
  check_symmetric(M, name);
  const double lo = min_eigenvalue(M);
  if (strict ? !(lo > 0.0) : lo < -kSymmetryTol * (1.0 + M.norm())) {
    throw InvalidModel(name + (strict ? ": must be positive definite"
                                      : ": must be positive semidefinite"));
  }
}

}  // namespace

void PlantModel::validate() const {
  const Eigen::Index n = A.rows();
  if (n == 0) {
    throw InvalidModel("A: state dimension must be positive");
  }
  check_shape(A, n, n, "A");
  if (B.cols() == 0 || C.rows() == 0 || Bw.cols() == 0) {
    throw InvalidModel("B/C/Bw: input, output and noise dimensions must be positive");
  }
  check_shape(B, n, B.cols(), "B");
  check_shape(Bw, n, Bw.cols(), "Bw");
  check_shape(C, C.rows(), n, "C");
  check_shape(Q, n, n, "Q");
  check_shape(R, B.cols(), B.cols(), "R");
  check_shape(W, Bw.cols(), Bw.cols(), "W");
  check_shape(V, C.rows(), C.rows(), "V");
  check_definite(Q, false, "Q");
  check_definite(R, true, "R");
  check_definite(W, true, "W");
  check_definite(V, true, "V");
}

LtiController LtiController::transformed(const Matrix& T) const {
  Eigen::PartialPivLU<Matrix> lu(T);
  LtiController out;
  out.A = T * A * lu.inverse();
  out.B = T * B;
  out.C = C * lu.inverse();
  out.D = D;
  return out;
}

LtiController static_gain(const Matrix& D) {
  return {Matrix(0, 0), Matrix(0, D.cols()), Matrix(D.rows(), 0), D};
}

}  // namespace lqgrl
