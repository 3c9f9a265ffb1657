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

#include <random>
#include <vector>

#include "lqgrl/plant.hpp"
#include "lqgrl/policy.hpp"
#include "lqgrl/reward.hpp"
#include "lqgrl/trainer.hpp"

namespace lqgrl::testing {

// Published Doyle policies (four printed digits).
inline Vector doyle_theta_lqg() {
  return (Vector(4) << -0.1095, -0.0491, -21.02, 23.21).finished();
}
inline Vector doyle_theta_opt() {
  return (Vector(4) << -0.0346, -0.0687, -20.3441, 22.83).finished();
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows,
                            Eigen::Index cols, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// Rejection-samples policies from the hypercube whose nominal loop is stable.
inline std::vector<Vector> stable_samples(const PlantModel& plant,
                                          const PolicyForm& form,
                                          const Hypercube& cube, int count,
                                          std::uint64_t seed) {
  std::vector<Vector> out;
  const Vector zero = zero_perturbation(plant);
  for (int i = 0; static_cast<int>(out.size()) < count && i < 1000000; ++i) {
    Vector theta = sample_initial(cube, seed, i);
    if (exact_reward(plant, PolicyParams{form, theta}, zero).stable) {
      out.push_back(theta);
    }
  }
  return out;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace lqgrl::testing
