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

// Small dense SDP solver for
//
//   maximize  -tr[F0^T X]   subject to  tr[A_k X] = b_k,  X >= 0,
//
// with X complex Hermitian. Internally the problem is restricted to the face
// cut out by explicit zero constraints with semidefinite A_k, embedded into
// real symmetric matrices via [Re -Im; Im Re], and solved with an infeasible
// primal-dual path-following method (HKM direction, Mehrotra predictor-
// corrector).

#include <optional>
#include <string>
#include <vector>

#include "qfix/linops.hpp"

namespace qfix::sdp {

struct Constraint {
  HermitianOperator a;
  double b;
};

struct SdpProblem {
  Index n = 0;
  HermitianOperator objective = HermitianOperator::identity(1);
  std::vector<Constraint> constraints;

  void validate() const;
};

enum class SdpStatus { kOptimal, kInfeasible, kNumericalLimit };

const char* to_string(SdpStatus s);

struct SdpOptions {
  int max_iter = 200;
  double feas_tol = 1e-7;
  double psd_tol = 1e-9;
  bool parallel = true;
};

struct SdpSolution {
  HermitianOperator x = HermitianOperator::zero(1);
  /// Value of the maximization, -tr[F0^T X].
  double objective_value = 0.0;
  /// max_k |tr[A_k X] - b_k| over every input constraint.
  double primal_residual = 0.0;
  /// Frobenius norm of the dual slack residual in the reduced problem.
  double dual_residual = 0.0;
  double gap = 0.0;
  SdpStatus status = SdpStatus::kNumericalLimit;
  int iterations = 0;
  Index rank = 0;
  /// Dimension of the face X was restricted to.
  Index face_dim = 0;
  /// Multipliers y (one per input constraint) for optimal solutions.
  std::vector<double> dual;
  /// For infeasible problems: y with sum_k y_k A_k <= 0 (or == 0) and b.y > 0.
  std::optional<std::vector<double>> certificate;
  std::string message;
};

/// Constraints tr[(E (x) sigma^T) X] = tr[E sigma] for every sigma and every
/// element E of a Hermitian basis of the output space built from sigma's
/// eigenvectors. Exactly repeated rows are dropped. Objective F0 = 1.
SdpProblem assemble_fixed_point_constraints(const std::vector<DensityMatrix>& sigmas);

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {});

}  // namespace qfix::sdp
