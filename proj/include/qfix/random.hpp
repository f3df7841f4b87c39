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

#include <cstdint>
#include <random>

#include "qfix/linops.hpp"

namespace qfix::random {

using Engine = std::mt19937_64;

/// Complex Ginibre matrix with i.i.d. standard normal real and imaginary parts.
ComplexMatrix ginibre(Engine& rng, Index rows, Index cols);

/// Haar-distributed unitary: QR of a Ginibre matrix, with the phases of R's
/// diagonal moved into Q so the distribution is exactly Haar.
ComplexMatrix haar_unitary(Engine& rng, Index dim);

/// Hilbert-Schmidt random state (G G^dagger / tr) with G of size dim x rank.
DensityMatrix density_matrix(Engine& rng, Index dim, Index rank = 0);
DensityMatrix pure_state(Engine& rng, Index dim);
HermitianOperator hermitian(Engine& rng, Index dim);

/// Kraus operators of a random channel from a Haar isometry into dim * kraus_rank.
std::vector<ComplexMatrix> kraus_channel(Engine& rng, Index dim, Index kraus_rank);

}  // namespace qfix::random
