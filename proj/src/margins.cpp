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

#include "lqgrl/margins.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lqgrl/errors.hpp"
#include "lqgrl/policy.hpp"

namespace lqgrl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// State-space model from a signal injected at plant input `channel` to the
// controller's command on that channel, all other channels closed.
struct OpenLoop {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
};

OpenLoop open_loop_at(const PlantModel& plant, const LtiController& k,
                      Eigen::Index channel) {
  const Eigen::Index nu = plant.input_dim();
  if (channel < 0 || channel >= nu) {
    throw DimensionMismatch("margin channel out of range");
  }
  Vector others = Vector::Ones(nu);
  others(channel) = 0.0;

  OpenLoop ol;
  ol.A = closed_loop_matrix(plant, k, others);
  const Eigen::Index nx = plant.state_dim();
  const Eigen::Index nk = k.order();
  ol.B = Matrix::Zero(nx + nk, 1);
  ol.B.topRows(nx) = plant.B.col(channel);
  ol.C = Matrix::Zero(1, nx + nk);
  ol.C.rightCols(nk) = k.C.row(channel);
  if (!k.strictly_proper()) {
    ol.C.leftCols(nx) = k.D.row(channel) * plant.C;
  }
  ol.D = Matrix::Zero(1, 1);
  return ol;
}

std::complex<double> loop_at(const OpenLoop& ol, double omega) {
  // Nudge off a pole sitting exactly on a grid frequency.
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      return -freq_response(ol.A, ol.B, ol.C, ol.D, omega)(0, 0);
    } catch (const SingularResolvent&) {
      omega += 1e-9 * (1.0 + omega);
    }
  }
  return {kInf, 0.0};
}

std::vector<double> log_grid(const MarginOptions& options) {
  const int n = std::max(options.grid_points, 2);
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double lo = std::log(options.min_frequency);
  const double hi = std::log(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (n - 1));
  }
  grid.back() = std::numbers::pi;
  return grid;
}

void require_nominal(const PlantModel& plant, const LtiController& controller,
                     Eigen::Index channel) {
  if (!stable_at_gain(plant, controller, 1.0, channel)) {
    throw UnstableNominal("nominal closed loop is not Schur stable");
  }
}

double disk_objective(const OpenLoop& ol, double omega) {
  const std::complex<double> L = loop_at(ol, omega);
  return std::abs((1.0 - L) / (1.0 + L));
}

// Golden-section maximization of the disk objective on [a, b].
std::pair<double, double> golden_max(const OpenLoop& ol, double a, double b,
                                     double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = disk_objective(ol, c);
  double fd = disk_objective(ol, d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = disk_objective(ol, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = disk_objective(ol, d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Walk outward from gain 1 in geometrically growing steps, then bisect the
// first stable/unstable bracket.
double gain_boundary(const PlantModel& plant, const LtiController& controller,
                     double direction, const MarginOptions& options) {
  double last_stable = 1.0;
  double offset = 1e-4;
  while (offset <= options.gain_search_limit) {
    const double k = 1.0 + direction * offset;
    if (!stable_at_gain(plant, controller, k, options.channel)) {
      double stable = last_stable;
      double unstable = k;
      // Refine on the raw spectral radius; the conservative unit-circle band
      // of is_schur_stable would bias the endpoint inward.
      Vector gains = Vector::Ones(plant.input_dim());
      while (std::abs(unstable - stable) >
             options.gain_tol * std::max(1.0, std::abs(stable))) {
        const double mid = 0.5 * (stable + unstable);
        gains(options.channel) = mid;
        if (spectral_radius(closed_loop_matrix(plant, controller, gains)) < 1.0) {
          stable = mid;
        } else {
          unstable = mid;
        }
      }
      return stable;
    }
    last_stable = k;
    offset *= 1.25;
  }
  return direction * kInf;
}

}  // namespace

bool stable_at_gain(const PlantModel& plant, const LtiController& controller,
                    double gain, Eigen::Index channel) {
  Vector gains = Vector::Ones(plant.input_dim());
  gains(channel) = gain;
  return is_schur_stable(closed_loop_matrix(plant, controller, gains)).stable;
}

std::complex<double> loop_response(const PlantModel& plant,
                                   const LtiController& controller,
                                   double omega, const MarginOptions& options) {
  return loop_at(open_loop_at(plant, controller, options.channel), omega);
}

GainInterval gain_margin_interval(const PlantModel& plant,
                                  const LtiController& controller,
                                  const MarginOptions& options) {
  require_nominal(plant, controller, options.channel);
  return {gain_boundary(plant, controller, -1.0, options),
          gain_boundary(plant, controller, +1.0, options)};
}

PhaseMargin phase_margin(const PlantModel& plant,
                         const LtiController& controller,
                         const MarginOptions& options) {
  require_nominal(plant, controller, options.channel);
  const OpenLoop ol = open_loop_at(plant, controller, options.channel);
  const std::vector<double> grid = log_grid(options);

  PhaseMargin out;
  double prev_w = grid.front();
  bool prev_above = std::abs(loop_at(ol, prev_w)) >= 1.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double w = grid[i];
    const bool above = std::abs(loop_at(ol, w)) >= 1.0;
    if (above != prev_above) {
      double a = prev_w;
      double b = w;
      while (b - a > options.crossover_tol) {
        const double mid = 0.5 * (a + b);
        if ((std::abs(loop_at(ol, mid)) >= 1.0) == prev_above) {
          a = mid;
        } else {
          b = mid;
        }
      }
      const double wc = 0.5 * (a + b);
      const double phase_deg =
          std::arg(loop_at(ol, wc)) * 180.0 / std::numbers::pi;
      const double distance = 180.0 - std::abs(phase_deg);
      if (!out.has_crossover || distance < out.degrees) {
        out.degrees = distance;
        out.crossover_frequency = wc;
      }
      out.has_crossover = true;
    }
    prev_w = w;
    prev_above = above;
  }
  return out;
}

DiskMargin disk_margin(const PlantModel& plant, const LtiController& controller,
                       const MarginOptions& options) {
  require_nominal(plant, controller, options.channel);
  const OpenLoop ol = open_loop_at(plant, controller, options.channel);
  const std::vector<double> grid = log_grid(options);

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = disk_objective(ol, grid[i]);
  }

  DiskMargin out;
  out.peak = disk_objective(ol, 0.0);
  out.peak_frequency = 0.0;
  // Polish every interior local maximum of the grid samples.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool left_ok = i == 0 || values[i] >= values[i - 1];
    const bool right_ok = i + 1 == grid.size() || values[i] >= values[i + 1];
    if (!(left_ok && right_ok)) {
      continue;
    }
    double best_w = grid[i];
    double best_v = values[i];
    if (i > 0 && i + 1 < grid.size()) {
      const auto [w, v] =
          golden_max(ol, grid[i - 1], grid[i + 1], options.peak_tol);
      if (v > best_v) {
        best_w = w;
        best_v = v;
      }
    }
    if (best_v > out.peak) {
      out.peak = best_v;
      out.peak_frequency = best_w;
    }
  }

  out.alpha = 2.0 / out.peak;
  out.margin = out.alpha < 2.0 ? (2.0 + out.alpha) / (2.0 - out.alpha) : kInf;
  if (std::isfinite(out.margin)) {
    out.verified =
        stable_at_gain(plant, controller, (1.0 + 1e-6) / out.margin,
                       options.channel) &&
        stable_at_gain(plant, controller, out.margin * (1.0 - 1e-6),
                       options.channel);
  } else {
    out.verified = stable_at_gain(plant, controller, 1e-6, options.channel) &&
                   stable_at_gain(plant, controller, 1e6, options.channel);
  }
  return out;
}

MarginReport analyze_margins(const PlantModel& plant,
                             const LtiController& controller,
                             const MarginOptions& options) {
  MarginReport report;
  report.gain = gain_margin_interval(plant, controller, options);
  report.phase = phase_margin(plant, controller, options);
  report.disk = disk_margin(plant, controller, options);
  return report;
}

}  // namespace lqgrl
