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

#include <complex>

#include <Eigen/Dense>

namespace lqgrl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Eigenvalues within this distance of the unit circle count as unstable.
inline constexpr double kUnitCircleTolerance = 1e-9;

struct LyapunovOptions {
  double rel_tol = 1e-13;
  int max_doublings = 200;
  // ||X|| beyond divergence_bound * (1 + ||W||) is treated as divergence.
  double divergence_bound = 1e12;
};

struct RiccatiOptions {
  double rel_tol = 1e-12;
  int max_iterations = 200;
  double residual_tol = 1e-9;
};

struct StabilityVerdict {
  bool stable = false;
  double spectral_radius = 0.0;
};

/// Steady-state covariance of x_{t+1} = A x_t + w_t, i.e. the solution of
/// X = A X A^T + W, by squared Smith iteration.
///
/// Throws NonStable when the iteration diverges (A not Schur) and
/// DimensionMismatch on non-conforming shapes. Pass A^T to obtain the
/// observability-form solution X = A^T X A + W.
[[nodiscard]] Matrix solve_dlyap(const Matrix& A, const Matrix& W,
                                 const LyapunovOptions& options = {});

/// Stabilizing solution of X = A'XA - A'XB(R + B'XB)^{-1}B'XA + Q by the
/// structured doubling algorithm. The residual and closed-loop stability are
/// checked before returning; failure of either throws NoStabilizingSolution.
[[nodiscard]] Matrix solve_dare(const Matrix& A, const Matrix& B,
                                const Matrix& Q, const Matrix& R,
                                const RiccatiOptions& options = {});

[[nodiscard]] StabilityVerdict is_schur_stable(const Matrix& A);

[[nodiscard]] double spectral_radius(const Matrix& A);

// C (zI - A)^{-1} B + D evaluated at z = exp(j * omega).
[[nodiscard]] ComplexMatrix freq_response(const Matrix& A, const Matrix& B,
                                          const Matrix& C, const Matrix& D,
                                          double omega);

// Frobenius norms of the equation residuals, for verification.
[[nodiscard]] double dlyap_residual(const Matrix& A, const Matrix& W,
                                    const Matrix& X);
[[nodiscard]] double dare_residual(const Matrix& A, const Matrix& B,
                                   const Matrix& Q, const Matrix& R,
                                   const Matrix& X);

// Feedback gain (R + B'XB)^{-1} B'XA associated with a DARE solution.
[[nodiscard]] Matrix dare_gain(const Matrix& A, const Matrix& B,
                               const Matrix& R, const Matrix& X);

[[nodiscard]] inline Matrix symmetrized(const Matrix& X) {
  return 0.5 * (X + X.transpose());
}

// sum_ij A_ij B_ij
[[nodiscard]] inline double frobenius_inner(const Matrix& A, const Matrix& B) {
  return A.cwiseProduct(B).sum();
}

[[nodiscard]] bool all_finite(const Matrix& A);

}  // namespace lqgrl
