// Copyright 2026 The qfix Authors
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

namespace qfix {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, non-Hermitian matrices, bad weights.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A construction or optimization precondition does not hold for otherwise
/// well-formed input (e.g. a validity inequality fails, an SDP is infeasible).
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string reason, std::string message)
      : Error(std::move(message)), reason_(std::move(reason)) {}
  explicit InfeasibleError(const std::string& message)
      : InfeasibleError("infeasible", message) {}

  /// Short machine-readable tag.
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

/// Iterative method stopped before reaching its tolerances.
class NumericalLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfix
