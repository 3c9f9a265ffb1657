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

#include "lqgrl/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lqgrl/errors.hpp"

namespace lqgrl {
namespace {

void require_square(const Matrix& A, const char* what) {
  if (A.rows() != A.cols()) {
    throw DimensionMismatch(std::string(what) + " must be square, got " +
                            std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()));
  }
}

void require_shape(const Matrix& M, Eigen::Index rows, Eigen::Index cols,
                   const char* what) {
  if (M.rows() != rows || M.cols() != cols) {
    throw DimensionMismatch(std::string(what) + " expected " +
                            std::to_string(rows) + "x" + std::to_string(cols) +
                            ", got " + std::to_string(M.rows()) + "x" +
                            std::to_string(M.cols()));
  }
}

}  // namespace

bool all_finite(const Matrix& A) { return A.allFinite(); }

Matrix solve_dlyap(const Matrix& A, const Matrix& W,
                   const LyapunovOptions& options) {
  require_square(A, "solve_dlyap: A");
  require_shape(W, A.rows(), A.rows(), "solve_dlyap: W");

  const double w_norm = W.norm();
  const double bound = options.divergence_bound * (1.0 + w_norm);

  // After k doublings X holds sum_{j < 2^k} A^j W A^j' and Ak = A^(2^k).
  Matrix X = W;
  Matrix Ak = A;
  Matrix update(A.rows(), A.rows());
  Matrix tmp(A.rows(), A.rows());
  for (int k = 0; k < options.max_doublings; ++k) {
    tmp.noalias() = Ak * X;
    update.noalias() = tmp * Ak.transpose();
    X += update;
    const double x_norm = X.norm();
    if (!std::isfinite(x_norm) || x_norm > bound) {
      throw NonStable("solve_dlyap: iteration diverged, A is not Schur stable");
    }
    // The remaining tail is bounded by the update once ||Ak|| is well below 1.
    const double ak_norm = Ak.norm();
    if (update.norm() <= options.rel_tol * x_norm && ak_norm <= 0.5) {
      return symmetrized(X);
    }
    tmp.noalias() = Ak * Ak;
    Ak.swap(tmp);
    if (!Ak.allFinite()) {
      throw NonStable("solve_dlyap: iteration diverged, A is not Schur stable");
    }
  }
  throw NonStable("solve_dlyap: no convergence within the doubling cap");
}

Matrix solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q,
                  const Matrix& R, const RiccatiOptions& options) {
  require_square(A, "solve_dare: A");
  const Eigen::Index n = A.rows();
  if (B.rows() != n) {
    throw DimensionMismatch("solve_dare: B must have as many rows as A");
  }
  require_shape(Q, n, n, "solve_dare: Q");
  require_shape(R, B.cols(), B.cols(), "solve_dare: R");

  Eigen::LLT<Matrix> r_chol(R);
  if (r_chol.info() != Eigen::Success) {
    throw NoStabilizingSolution("solve_dare: R is not positive definite");
  }

  // SDA iterates: A_k -> A^(2^k) (closed loop), G_k -> controllability
  // gramian-like term, H_k -> X.
  Matrix Ak = A;
  Matrix G = symmetrized(B * r_chol.solve(B.transpose()));
  Matrix H = symmetrized(Q);
  const Matrix I = Matrix::Identity(n, n);

  bool converged = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::PartialPivLU<Matrix> lu(I + G * H);
    const Matrix inv_A = lu.solve(Ak);
    const Matrix inv_G = lu.solve(G);
    Matrix H_next = symmetrized(H + Ak.transpose() * H * inv_A);
    Matrix G_next = symmetrized(G + Ak * inv_G * Ak.transpose());
    Matrix A_next = Ak * inv_A;
    if (!H_next.allFinite() || !G_next.allFinite() || !A_next.allFinite()) {
      break;
    }
    const double change = (H_next - H).norm();
    H.swap(H_next);
    G.swap(G_next);
    Ak.swap(A_next);
    if (change <= options.rel_tol * H.norm()) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NoStabilizingSolution("solve_dare: doubling iteration did not converge");
  }

  const double residual = dare_residual(A, B, Q, R, H);
  if (residual > options.residual_tol * (1.0 + H.norm())) {
    throw NoStabilizingSolution("solve_dare: residual " +
                                std::to_string(residual) + " exceeds tolerance");
  }
  const Matrix closed = A - B * dare_gain(A, B, R, H);
  if (!is_schur_stable(closed).stable) {
    throw NoStabilizingSolution(
        "solve_dare: converged solution is not stabilizing");
  }
  return H;
}

Matrix dare_gain(const Matrix& A, const Matrix& B, const Matrix& R,
                 const Matrix& X) {
  const Matrix BtX = B.transpose() * X;
  return (R + BtX * B).ldlt().solve(BtX * A);
}

double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q,
                     const Matrix& R, const Matrix& X) {
  const Matrix AtXB = A.transpose() * X * B;
  const Matrix S = R + B.transpose() * X * B;
  const Matrix rhs =
      A.transpose() * X * A - AtXB * S.ldlt().solve(AtXB.transpose()) + Q;
  return (rhs - X).norm();
}

double dlyap_residual(const Matrix& A, const Matrix& W, const Matrix& X) {
  return (A * X * A.transpose() - X + W).norm();
}

StabilityVerdict is_schur_stable(const Matrix& A) {
  const double radius = spectral_radius(A);
  return {radius < 1.0 - kUnitCircleTolerance, radius};
}

double spectral_radius(const Matrix& A) {
  require_square(A, "is_schur_stable: A");
  if (A.size() == 0) {
    return 0.0;
  }
  if (!A.allFinite()) {
    return std::numeric_limits<double>::infinity();
  }
  // Hessenberg reduction followed by shifted QR (Francis) iteration.
  Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    return std::numeric_limits<double>::infinity();
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

ComplexMatrix freq_response(const Matrix& A, const Matrix& B, const Matrix& C,
                            const Matrix& D, double omega) {
  require_square(A, "freq_response: A");
  const Eigen::Index n = A.rows();
  if (B.rows() != n || C.cols() != n) {
    throw DimensionMismatch("freq_response: B/C do not conform with A");
  }
  require_shape(D, C.rows(), B.cols(), "freq_response: D");
  if (n == 0) {
    return D.cast<std::complex<double>>();
  }
  const std::complex<double> z = std::polar(1.0, omega);
  ComplexMatrix resolvent = -A.cast<std::complex<double>>();
  resolvent.diagonal().array() += z;
  Eigen::PartialPivLU<ComplexMatrix> lu(resolvent);
  if (!(lu.rcond() > 1e-14)) {
    throw SingularResolvent("freq_response: exp(j*omega) is an eigenvalue of A");
  }
  return C.cast<std::complex<double>>() *
             lu.solve(B.cast<std::complex<double>>()) +
         D.cast<std::complex<double>>();
}

}  // namespace lqgrl
