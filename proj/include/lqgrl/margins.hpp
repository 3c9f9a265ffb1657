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
#include <limits>

#include "lqgrl/linalg.hpp"
#include "lqgrl/plant.hpp"

namespace lqgrl {

struct MarginOptions {
  int grid_points = 10000;
  // Log-spaced frequency grid over [min_frequency, pi] rad/sample.
  double min_frequency = 1e-5;
  double crossover_tol = 1e-10;
  double peak_tol = 1e-8;
  // Relative bracket on the gain-interval endpoints.
  double gain_tol = 1e-12;
  // Gains beyond this distance from 1 are reported as unbounded.
  double gain_search_limit = 1e6;
  // Input channel at which the loop is broken (others stay closed).
  Eigen::Index channel = 0;
};

struct GainInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct PhaseMargin {
  // Degrees; +inf without a unit-gain crossover.
  double degrees = std::numeric_limits<double>::infinity();
  bool has_crossover = false;
  double crossover_frequency = 0.0;
};

struct DiskMargin {
  double alpha = 0.0;
  double margin = 1.0;  // m_d = (2 + alpha) / (2 - alpha)
  double peak = 0.0;    // ||S - T||_inf
  double peak_frequency = 0.0;
  // Loop verified stable at real gains just inside [1/m_d, m_d].
  bool verified = false;
};

struct MarginReport {
  GainInterval gain;
  PhaseMargin phase;
  DiskMargin disk;
};

// Loop transfer at the plant input with the nominal characteristic equation
// 1 + L(z) = 0, i.e. L = -K P for the positive-feedback interconnection
// u = K(z) y, y = P(z) u.
[[nodiscard]] std::complex<double> loop_response(const PlantModel& plant,
                                                 const LtiController& controller,
                                                 double omega,
                                                 const MarginOptions& options = {});

// Largest interval of real input-gain multipliers containing 1 on which the
// closed loop stays Schur. Throws UnstableNominal.
[[nodiscard]] GainInterval gain_margin_interval(
    const PlantModel& plant, const LtiController& controller,
    const MarginOptions& options = {});

// Minimum angular distance of L(e^{jw}) from -180 degrees over all
// unit-gain crossovers. Throws UnstableNominal.
[[nodiscard]] PhaseMargin phase_margin(const PlantModel& plant,
                                       const LtiController& controller,
                                       const MarginOptions& options = {});

// Symmetric disk margin, alpha = 2 / ||S - T||_inf with S = 1 / (1 + L).
// Throws UnstableNominal.
[[nodiscard]] DiskMargin disk_margin(const PlantModel& plant,
                                     const LtiController& controller,
                                     const MarginOptions& options = {});

[[nodiscard]] MarginReport analyze_margins(const PlantModel& plant,
                                           const LtiController& controller,
                                           const MarginOptions& options = {});

// Whether the loop is Schur with input gain k on the analyzed channel.
[[nodiscard]] bool stable_at_gain(const PlantModel& plant,
                                  const LtiController& controller, double gain,
                                  Eigen::Index channel = 0);

}  // namespace lqgrl
