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

#include "lqgrl/reward.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "lqgrl/errors.hpp"
#include "lqgrl/quadrature.hpp"

namespace lqgrl {
namespace {

constexpr double kRolloutBound = 1e12;

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Gradient of -trace(M X) through the adjoint Y = A' Y A + M:
//   dJ_k = -( <dM_k, X> + <dA_k, 2 Y A X> + <dW_k, Y> ).
Vector reward_gradient(const PlantModel& plant, const LtiController& k,
                       const ClosedLoop& loop, const Matrix& X,
                       const std::vector<LtiController>& jacobian) {
  const Matrix Y = solve_dlyap(loop.A_bar.transpose(), loop.M);
  const Matrix G = 2.0 * Y * loop.A_bar * X;

  const Eigen::Index nx = plant.state_dim();
  const Eigen::Index nk = k.order();
  const Matrix BG = plant.B * (Vector::Ones(loop.delta.size()) + loop.delta)
                                  .asDiagonal();
  const auto G_tr = G.topRightCorner(nx, nk);
  const auto G_bl = G.bottomLeftCorner(nk, nx);
  const auto G_br = G.bottomRightCorner(nk, nk);
  const auto X_k = X.bottomRightCorner(nk, nk);
  const auto Y_k = Y.bottomRightCorner(nk, nk);
  const Matrix RC = plant.R * k.C;
  const Matrix VB = plant.V * k.B.transpose();

  Vector grad(static_cast<Eigen::Index>(jacobian.size()));
  for (std::size_t p = 0; p < jacobian.size(); ++p) {
    const LtiController& d = jacobian[p];
    double dj = 0.0;
    if (!d.A.isZero(0.0)) {
      dj += d.A.cwiseProduct(G_br).sum();
    }
    if (!d.B.isZero(0.0)) {
      dj += (d.B * plant.C).cwiseProduct(G_bl).sum();
      const Matrix dW = d.B * VB;
      dj += (dW + dW.transpose()).cwiseProduct(Y_k).sum();
    }
    if (!d.C.isZero(0.0)) {
      dj += (BG * d.C).cwiseProduct(G_tr).sum();
      const Matrix dM = d.C.transpose() * RC;
      dj += (dM + dM.transpose()).cwiseProduct(X_k).sum();
    }
    grad(static_cast<Eigen::Index>(p)) = -dj;
  }
  return grad;
}

}  // namespace

void PerturbationSpec::validate() const {
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("perturbation level b must be finite and >= 0");
  }
  if (quadrature_order < 1 || quadrature_order % 2 == 0) {
    throw std::invalid_argument("quadrature order must be odd and >= 1");
  }
  if (mc_fallback_samples < 1) {
    throw std::invalid_argument("mc_fallback_samples must be >= 1");
  }
}

std::vector<PerturbationNode> perturbation_nodes(const PerturbationSpec& spec,
                                                 Eigen::Index input_dim) {
  spec.validate();
  std::vector<PerturbationNode> out;
  if (spec.b == 0.0) {
    out.push_back({Vector::Zero(input_dim), 1.0});
    return out;
  }
  if (input_dim <= spec.max_tensor_channels) {
    const QuadratureRule rule = gauss_legendre(spec.quadrature_order);
    const std::size_t q = rule.nodes.size();
    std::size_t total = 1;
    for (Eigen::Index c = 0; c < input_dim; ++c) total *= q;
    out.reserve(total);
    // Channel 0 varies fastest.
    for (std::size_t flat = 0; flat < total; ++flat) {
      PerturbationNode node{Vector(input_dim), 1.0};
      std::size_t rest = flat;
      for (Eigen::Index c = 0; c < input_dim; ++c) {
        const std::size_t i = rest % q;
        rest /= q;
        node.delta(c) = spec.b * rule.nodes[i];
        node.weight *= 0.5 * rule.weights[i];
      }
      out.push_back(std::move(node));
    }
    return out;
  }
  std::mt19937_64 rng = substream(spec.mc_seed, 0);
  std::uniform_real_distribution<double> unif(-spec.b, spec.b);
  const double w = 1.0 / spec.mc_fallback_samples;
  out.reserve(spec.mc_fallback_samples);
  for (int s = 0; s < spec.mc_fallback_samples; ++s) {
    PerturbationNode node{Vector(input_dim), w};
    for (Eigen::Index c = 0; c < input_dim; ++c) node.delta(c) = unif(rng);
    out.push_back(std::move(node));
  }
  return out;
}

RewardEval exact_reward(const PlantModel& plant, const PolicyParams& policy,
                        const Vector& delta, bool with_gradient) {
  const LtiController k = realize(policy);
  const ClosedLoop loop = assemble(plant, k, delta);
  if (!is_schur_stable(loop.A_bar).stable) {
    return RewardEval::unstable();
  }
  RewardEval out;
  Matrix X;
  try {
    X = solve_dlyap(loop.A_bar, loop.W_bar);
  } catch (const NonStable&) {
    return RewardEval::unstable();
  }
  out.stable = true;
  out.value = -frobenius_inner(loop.M, X);
  if (with_gradient) {
    try {
      out.gradient =
          reward_gradient(plant, k, loop, X, realize_jacobian(policy.form));
    } catch (const NonStable&) {
      return RewardEval::unstable();
    }
  }
  return out;
}

Vector exact_gradient(const PlantModel& plant, const PolicyParams& policy,
                      const Vector& delta) {
  RewardEval eval = exact_reward(plant, policy, delta, true);
  if (!eval.stable) {
    throw UnstableLoop("exact_gradient: closed loop is not Schur stable");
  }
  return *eval.gradient;
}

RewardEval averaged_reward(const PlantModel& plant, const PolicyParams& policy,
                           const PerturbationSpec& spec, bool with_gradient) {
  spec.validate();
  if (spec.b == 0.0) {
    return exact_reward(plant, policy, zero_perturbation(plant), with_gradient);
  }
  RewardEval total;
  total.stable = true;
  total.value = 0.0;
  if (with_gradient) {
    total.gradient = Vector::Zero(policy.form.param_count());
  }
  // Fixed node order keeps the sum bitwise reproducible.
  for (const PerturbationNode& node :
       perturbation_nodes(spec, plant.input_dim())) {
    const RewardEval eval =
        exact_reward(plant, policy, node.delta, with_gradient);
    if (!eval.stable) {
      return RewardEval::unstable();
    }
    total.value += node.weight * eval.value;
    if (with_gradient) {
      *total.gradient += node.weight * *eval.gradient;
    }
  }
  return total;
}

McEstimate mc_reward(const PlantModel& plant, const LtiController& controller,
                     const Vector& delta, long horizon, int episodes,
                     std::uint64_t seed) {
  if (horizon < 1 || episodes < 1) {
    throw std::invalid_argument("mc_reward: horizon and episodes must be >= 1");
  }
  // Shape checks.
  (void)assemble(plant, controller, delta);

  const Matrix w_chol = plant.W.llt().matrixL();
  const Matrix v_chol = plant.V.llt().matrixL();
  const Matrix B_pert =
      plant.B * (Vector::Ones(delta.size()) + delta).asDiagonal();
  const Matrix Bw_chol = plant.Bw * w_chol;

  const Eigen::Index nx = plant.state_dim();
  const Eigen::Index nk = controller.order();
  std::vector<double> returns(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(e));
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector x = Vector::Zero(nx);
    Vector z = Vector::Zero(nk);
    Vector u(plant.input_dim());
    Vector y(plant.output_dim());
    Vector w(plant.noise_dim());
    Vector v(plant.output_dim());
    Vector x_next(nx);
    Vector z_next(nk);
    double sum = 0.0;
    for (long t = 0; t < horizon; ++t) {
      u.noalias() = controller.C * z;
      sum += x.dot(plant.Q * x) + u.dot(plant.R * u);
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = normal(rng);
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
      y.noalias() = plant.C * x;
      y.noalias() += v_chol * v;
      x_next.noalias() = plant.A * x;
      x_next.noalias() += B_pert * u;
      x_next.noalias() += Bw_chol * w;
      z_next.noalias() = controller.A * z;
      z_next.noalias() += controller.B * y;
      x.swap(x_next);
      z.swap(z_next);
      if (!(x.squaredNorm() + z.squaredNorm() <= kRolloutBound * kRolloutBound)) {
        throw RolloutOverflow("mc_reward: episode " + std::to_string(e) +
                              " diverged at step " + std::to_string(t));
      }
    }
    returns[static_cast<std::size_t>(e)] = -sum / static_cast<double>(horizon);
  }

  McEstimate out;
  out.episodes = episodes;
  out.horizon = horizon;
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= episodes;
  out.mean = mean;
  if (episodes < 2) {
    out.std_error = std::numeric_limits<double>::infinity();
  } else {
    double ss = 0.0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    out.std_error = std::sqrt(ss / (episodes - 1) / episodes);
  }
  return out;
}

McEstimate mc_reward(const PlantModel& plant, const PolicyParams& policy,
                     const Vector& delta, long horizon, int episodes,
                     std::uint64_t seed) {
  return mc_reward(plant, realize(policy), delta, horizon, episodes, seed);
}

double finite_horizon_reward(const PlantModel& plant,
                             const LtiController& controller,
                             const Vector& delta, long horizon) {
  if (horizon < 1) {
    throw std::invalid_argument("finite_horizon_reward: horizon must be >= 1");
  }
  const ClosedLoop loop = assemble(plant, controller, delta);
  Matrix X = Matrix::Zero(loop.A_bar.rows(), loop.A_bar.cols());
  double sum = 0.0;
  for (long t = 0; t < horizon; ++t) {
    sum += frobenius_inner(loop.M, X);
    X = loop.A_bar * X * loop.A_bar.transpose() + loop.W_bar;
  }
  return -sum / static_cast<double>(horizon);
}

}  // namespace lqgrl
