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

// Constructive design of channels with prescribed fixed points.

#include <optional>
#include <string>
#include <vector>

#include "qfix/channel.hpp"
#include "qfix/sdp.hpp"

namespace qfix::engineer {

/// One numeric check of a construction's preconditions.
struct ValidityCheck {
  std::string name;
  std::string relation;  // e.g. "<=", "<", ">", "=="
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool skipped = false;  // vacuous for this input
  bool blocking = true;  // false for entries that are reported only
};

using ValidityLedger = std::vector<ValidityCheck>;

bool all_passed(const ValidityLedger& ledger);

struct SingleFixedPointSpec {
  DensityMatrix sigma;
  DensityMatrix b;
  double lambda_max = 0.0;
  ComplexVector v_max;

  /// Fills lambda_max and v_max from the leading (canonical) eigenpair of sigma.
  static SingleFixedPointSpec from_states(DensityMatrix sigma, DensityMatrix b);
};

/// Checks "<V|B|V> <= lambda_max" and complete positivity of the result,
/// which for this family is sigma - (1 - lambda_max) B >= 0.
ValidityLedger check_single_fixed_point(const SingleFixedPointSpec& spec);

/// C = sigma (x) P^T / lambda + B (x) (1 - P^T / lambda), P = |V><V|, with
/// no precondition checks.
ChoiMatrix assemble_single_fixed_point(const SingleFixedPointSpec& spec);

/// As assemble_single_fixed_point, but throws InfeasibleError naming the
/// first failed inequality.
ChoiMatrix build_single_fixed_point(const SingleFixedPointSpec& spec);

struct DiscriminationResult {
  bool feasible = false;
  /// Projector candidates, one per state (also filled when infeasible).
  std::vector<HermitianOperator> projectors;
  /// tr[Pi_i sigma_i].
  std::vector<double> success;
  /// Rank of each projector.
  std::vector<Index> ranks;
  /// Dimension of the kernel of each state.
  std::vector<Index> kernel_dims;
  /// Index of the first state whose projector has tr[Pi_i sigma_i] <= rank_tol.
  std::optional<std::size_t> failed_index;
  std::string reason;
};

/// Pi_i = projector onto (intersection of ker sigma_j, j != i) with the
/// common kernel of all states removed.
DiscriminationResult find_discrimination_projectors(const std::vector<DensityMatrix>& sigmas,
                                                    double rank_tol = tol::kRank);

struct SeparableMultiSpec {
  std::vector<DensityMatrix> sigmas;
  std::vector<HermitianOperator> projectors;
  DensityMatrix b;

  /// 1 - sum_i tr[B Pi_i] / tr[Pi_i sigma_i].
  double convergence_margin() const;
};

/// Orthogonality tr[sigma_i Pi_j] = 0 (i != j), tr[Pi_i sigma_i] > rank_tol,
/// the B inequality (skipped when the residual operator vanishes), and the
/// informational complete-positivity entry for the assembled Choi matrix.
ValidityLedger check_separable_multi(const SeparableMultiSpec& spec, double rank_tol = tol::kRank);

/// C = sum_i sigma_i (x) Pi_i^T / t_i + B (x) (1 - sum_i Pi_i^T / t_i),
/// t_i = tr[Pi_i sigma_i], with no checks.
ChoiMatrix assemble_separable_multi(const SeparableMultiSpec& spec);

/// Checks the three discrimination conditions and throws InfeasibleError on
/// the first failure. Complete positivity is reported, not enforced.
ChoiMatrix build_separable_multi(const SeparableMultiSpec& spec, double rank_tol = tol::kRank);

/// 1 - sum_i Pi_i^T / tr[Pi_i sigma_i].
ComplexMatrix residual_operator(const SeparableMultiSpec& spec);

struct SdpChannel {
  ChoiMatrix x;
  ChoiMatrix c;
  /// tr[X (1 (x) B^T)]; iterations contract toward the fixed set when < 1.
  double contraction = 0.0;
  bool contraction_warning = false;
  sdp::SdpSolution solution;
  /// max |1 - tr_out[X]|, the size of the completion term.
  double residual_norm = 0.0;
  /// Smallest eigenvalue of the completion built from the minimum-trace X.
  double literal_min_eig = 0.0;
  /// Set when that completion was not completely positive and X was
  /// re-solved under the extra constraint tr_out[X] <= 1.
  bool completion_constrained = false;
};

/// Minimum-trace X fixing every sigma, completed to a trace-preserving map
/// C = X + B (x) (1 - tr_out[X]). The completion is CP only when
/// tr_out[X] <= 1; if the minimum-trace X violates this, X is re-solved with
/// that constraint added. Throws InfeasibleError when the SDP is
/// infeasible and NumericalLimitError when the solver stalls.
SdpChannel build_via_sdp(const std::vector<DensityMatrix>& sigmas, const DensityMatrix& b,
                         const sdp::SdpOptions& opts = {});

}  // namespace qfix::engineer
