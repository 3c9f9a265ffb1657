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

#include "lqgrl/presets.hpp"

#include <cmath>

namespace lqgrl::presets {

PlantModel doyle_plant() {
  // Continuous model xdot = [1 1; 0 1] x + [0; 1] u + [1; 1] w held over
  // Ts = 0.1: A = e^Ts [1 Ts; 0 1], B = [1 + (Ts - 1) e^Ts; e^Ts - 1].
  const double e = std::exp(0.1);
  PlantModel p;
  p.A.resize(2, 2);
  p.A << e, 0.1 * e,
         0.0, e;
  p.B.resize(2, 1);
  p.B << 1.0 - 0.9 * e, e - 1.0;
  p.Bw.resize(2, 1);
  p.Bw << 0.1 * e, e - 1.0;
  p.C.resize(1, 2);
  p.C << 1.0, 0.0;
  p.Q.resize(2, 2);
  p.Q << 1e3, 1e3,
         1e3, 1e3;
  p.R = Matrix::Constant(1, 1, 1.0);
  p.W = Matrix::Constant(1, 1, 1e3);
  p.V = Matrix::Constant(1, 1, 1.0);
  return p;
}

Hypercube doyle_hypercube() {
  Vector lower(4);
  Vector upper(4);
  lower << -0.2, -0.2, -40.0, 0.0;
  upper << 0.0, 0.0, 0.0, 40.0;
  return {lower, upper};
}

PlantModel flexible_plant() {
  PlantModel p;
  p.A.resize(4, 4);
  p.A << 0.9139, 0.0, 0.0, 0.0823,
         0.0, 0.6238, 0.0776, 0.0,
         0.0, -7.7632, 0.6083, 0.0,
         0.0, 0.0, 0.0, 0.9139;
  p.B.resize(4, 1);
  p.B << 0.0861, 0.3762, 7.7632, 0.0;
  p.Bw.resize(4, 1);
  p.Bw << 0.0017, 0.0, 0.0, 0.0387;
  p.C.resize(1, 4);
  p.C << 1.0, 10.0, 0.0, 1.0;
  p.Q = Matrix::Zero(4, 4);
  p.Q(0, 0) = 4.0;
  p.R = Matrix::Constant(1, 1, 1.0);
  p.W = Matrix::Constant(1, 1, 1.0);
  p.V = Matrix::Constant(1, 1, 0.01);
  return p;
}

Hypercube flexible_hypercube() {
  Vector lower(6);
  Vector upper(6);
  lower << 0.0, -2.0, 0.0, -0.1, 0.0, -0.3;
  upper << 1.0, 0.0, 2.0, 0.0, 0.3, 0.0;
  return {lower, upper};
}

}  // namespace lqgrl::presets
