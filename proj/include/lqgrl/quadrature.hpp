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

#include <vector>

namespace lqgrl {

// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes ascending. Throws std::invalid_argument for order < 1.
[[nodiscard]] QuadratureRule gauss_legendre(int order);

}  // namespace lqgrl
