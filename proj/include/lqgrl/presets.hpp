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

#include "lqgrl/plant.hpp"
#include "lqgrl/trainer.hpp"

namespace lqgrl::presets {

// Doyle's unstable double-integrator-like plant, zero-order hold at 0.1 s.
// Entries are the exact hold values (exp(0.1) and friends); the familiar
// 4-digit figures are their rounding.
[[nodiscard]] PlantModel doyle_plant();
[[nodiscard]] Hypercube doyle_hypercube();

// Rigid-body plus lightly damped flexible mode, zero-order hold at 0.09 s.
[[nodiscard]] PlantModel flexible_plant();
[[nodiscard]] Hypercube flexible_hypercube();

}  // namespace lqgrl::presets
