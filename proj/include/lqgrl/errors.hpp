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

#include <stdexcept>
#include <string>

namespace lqgrl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Lyapunov iteration diverged: the state matrix is not Schur.
class NonStable : public Error {
 public:
  using Error::Error;
};

class NoStabilizingSolution : public Error {
 public:
  using Error::Error;
};

// e^{jw} is numerically an eigenvalue of A.
class SingularResolvent : public Error {
 public:
  using Error::Error;
};

class UnstableLoop : public Error {
 public:
  using Error::Error;
};

class NotRepresentable : public Error {
 public:
  using Error::Error;
};

class RolloutOverflow : public Error {
 public:
  using Error::Error;
};

class UnstableNominal : public Error {
 public:
  using Error::Error;
};

// Plant data violating dimension or definiteness requirements.
class InvalidModel : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lqgrl
