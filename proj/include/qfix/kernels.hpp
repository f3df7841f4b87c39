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

// Data-parallel kernels. Each has a serial reference implementation that the
// tests compare against the OpenMP one.

#include <vector>

#include "qfix/linops.hpp"

namespace qfix {

enum class Execution { kSerial, kParallel };

namespace kernels {

/// Schur complement of the HKM direction: M(i, j) = tr(A_i X A_j Zinv).
RealMatrix schur_complement(const std::vector<RealMatrix>& a, const RealMatrix& x,
                            const RealMatrix& z_inv, Execution exec = Execution::kParallel);

/// Probabilities pi^T D(w_1) ... D(w_l) tau of every word of the given
/// length, in lexicographic order with the first symbol most significant.
/// The parallel version partitions the word range across threads.
std::vector<double> word_probabilities(const std::vector<RealMatrix>& d, const RealVector& pi,
                                       const RealVector& tau, int length,
                                       Execution exec = Execution::kParallel);

/// Maximum number of OpenMP threads the parallel kernels will use.
int max_threads();

}  // namespace kernels
}  // namespace qfix
