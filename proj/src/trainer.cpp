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

#include "lqgrl/trainer.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "lqgrl/errors.hpp"

namespace lqgrl {

void Hypercube::validate(Eigen::Index dim) const {
  if (lower.size() != dim || upper.size() != dim) {
    throw DimensionMismatch("hypercube bounds must have " +
                            std::to_string(dim) + " entries");
  }
  if (!lower.allFinite() || !upper.allFinite() ||
      (lower.array() > upper.array()).any()) {
    throw std::invalid_argument(
        "hypercube bounds must be finite with lower <= upper");
  }
}

void TrainConfig::validate(Eigen::Index dim) const {
  hypercube.validate(dim);
  if (n_init < 1 || n_steps < 1) {
    throw std::invalid_argument("n_init and n_steps must be >= 1");
  }
  if (!(step.eta > 0.0) || step.max_halvings < 0) {
    throw std::invalid_argument("step size eta must be > 0");
  }
  if (threads < 1) {
    throw std::invalid_argument("threads must be >= 1");
  }
  perturbation.validate();
}

AscentResult ascend(const PlantModel& plant, const PolicyForm& form,
                    const Vector& theta0, const TrainConfig& config) {
  PolicyParams policy{form, theta0};
  policy.validate();

  AscentResult out;
  out.theta = theta0;
  RewardEval current =
      averaged_reward(plant, policy, config.perturbation, true);
  if (!current.stable) {
    return out;
  }
  out.stable = true;
  out.reward = current.value;
  out.history.push_back(current.value);

  Vector prev_theta;
  Vector prev_grad;
  double length = config.step.eta;
  for (int step = 0; step < config.n_steps; ++step) {
    const Vector grad = *current.gradient;
    const double grad_norm = grad.norm();
    if (!(grad_norm >= config.step.min_gradient_norm)) {
      break;
    }
    if (step > 0 && config.step.barzilai_borwein) {
      // Curvature along the last step of the minimization of -J.
      const Vector s = policy.theta - prev_theta;
      const Vector y = prev_grad - grad;
      const double sy = s.dot(y);
      const double yy = y.squaredNorm();
      if (sy > 0.0 && yy > 0.0) {
        length = sy / yy * grad_norm;
      } else {
        length *= 2.0;
      }
    } else if (!config.step.barzilai_borwein) {
      length = config.step.eta;
    }

    const Vector direction = grad / grad_norm;
    PolicyParams candidate{form, Vector()};
    bool accepted = false;
    double trial = length;
    for (int h = 0; h <= config.step.max_halvings; ++h) {
      candidate.theta = policy.theta + trial * direction;
      const RewardEval eval =
          averaged_reward(plant, candidate, config.perturbation, false);
      if (eval.stable && eval.value >= current.value) {
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) {
      break;
    }
    RewardEval next =
        averaged_reward(plant, candidate, config.perturbation, true);
    if (!next.stable) {
      break;
    }
    prev_theta = policy.theta;
    prev_grad = grad;
    policy.theta = candidate.theta;
    current = std::move(next);
    length = trial;
    out.history.push_back(current.value);
    ++out.steps;
  }
  out.theta = policy.theta;
  out.reward = current.value;
  return out;
}

Vector sample_initial(const Hypercube& cube, std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x68797072u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector theta(cube.lower.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    theta(k) = cube.lower(k) + (cube.upper(k) - cube.lower(k)) * unit(rng);
  }
  return theta;
}

TrainResult train(const PlantModel& plant, const PolicyForm& form,
                  const TrainConfig& config) {
  config.validate(form.param_count());

  TrainResult result;
  result.seed = config.seed;
  result.theta_opt = Vector::Zero(form.param_count());
  result.traces.resize(static_cast<std::size_t>(config.n_init));

  auto run_one = [&](int i) {
    InitTrace& trace = result.traces[static_cast<std::size_t>(i)];
    trace.theta_initial = sample_initial(config.hypercube, config.seed, i);
    const AscentResult ascent = ascend(plant, form, trace.theta_initial, config);
    trace.theta_final = ascent.theta;
    trace.final_reward = ascent.reward;
    trace.initial_reward =
        ascent.history.empty() ? ascent.reward : ascent.history.front();
    trace.stable = ascent.stable;
    trace.steps = ascent.steps;
  };

  const int workers = std::min(config.threads, config.n_init);
  if (workers <= 1) {
    for (int i = 0; i < config.n_init; ++i) run_one(i);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < config.n_init; i += workers) run_one(i);
      });
    }
  }

  for (int i = 0; i < config.n_init; ++i) {
    const InitTrace& trace = result.traces[static_cast<std::size_t>(i)];
    if (trace.stable && trace.final_reward > result.reward_opt) {
      result.reward_opt = trace.final_reward;
      result.theta_opt = trace.theta_final;
      result.best_index = i;
    }
  }
  return result;
}

}  // namespace lqgrl
