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

// Settle-classify-kick simulation of a multi-fixed-point channel and
// estimation of the classical process it emits.

#include <cstdint>
#include <optional>
#include <vector>

#include "qfix/channel.hpp"
#include "qfix/kernels.hpp"
#include "qfix/quasireal.hpp"

namespace qfix::conesim {

/// The random channel applied between settling phases.
struct KickPolicy {
  enum class Type { kFixed, kHaarUnitary, kDepolarizing };

  Type type = Type::kDepolarizing;
  std::optional<ChoiMatrix> channel;  // kFixed only
  double strength = 0.5;              // kDepolarizing only

  static KickPolicy fixed(ChoiMatrix c);
  static KickPolicy haar_unitary();
  static KickPolicy depolarizing(double strength);
};

struct SimulationConfig {
  ChoiMatrix channel = ChoiMatrix::identity(1);
  KickPolicy kick;
  int n_iter = 1000;
  int n_rounds = 100;
  double classify_tol = 1e-3;
  std::uint64_t seed = 0;
  /// Sample a fixed point from the weights of a settled mixture when the
  /// fixed states have mutually orthogonal supports.
  bool collapse = true;
  double fp_tol = tol::kFixedPoint;

  void validate() const;
};

struct Round {
  int index = 0;
  DensityMatrix settled_state = DensityMatrix::maximally_mixed(1);
  /// Fixed-point index, or empty when unclassified.
  std::optional<std::size_t> symbol;
  int settle_steps = 0;
  bool converged = false;
  DensityMatrix post_kick_state = DensityMatrix::maximally_mixed(1);
  /// Non-negative weights of the settled state over the fixed states.
  std::vector<double> weights;
  /// Trace distance from the settled state to the closest fixed state.
  double distance = 0.0;
};

struct Trajectory {
  std::vector<DensityMatrix> fixed_points;
  std::vector<Round> rounds;

  std::size_t unclassified() const;
  std::vector<std::optional<std::size_t>> symbols() const;
};

/// Deterministic for a given config and seed.
Trajectory run(const SimulationConfig& config, const DensityMatrix& rho0);

/// One trajectory per seed; the parallel version distributes seeds over
/// threads and returns results identical to the serial reference.
std::vector<Trajectory> run_batch(const SimulationConfig& config, const DensityMatrix& rho0,
                                  const std::vector<std::uint64_t>& seeds,
                                  Execution exec = Execution::kParallel);

struct EmpiricalProcess {
  std::vector<std::size_t> symbols;
  RealMatrix counts;
  RealMatrix transition;
  RealVector stationary;
};

/// Counts transitions between consecutive classified rounds. Throws
/// InfeasibleError with fewer than two classified symbols.
EmpiricalProcess estimate_process(const std::vector<std::optional<std::size_t>>& symbols);
EmpiricalProcess estimate_process(const Trajectory& t);

/// M(u)[i][j] = transition[i][j] when j is u, else 0; pi = stationary;
/// tau = ones. Throws InfeasibleError when some row was never observed.
quasireal::QuasiRealization to_quasi_realization(const EmpiricalProcess& e);

}  // namespace qfix::conesim
