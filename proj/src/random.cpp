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

#include "qfix/random.hpp"

#include <cmath>

namespace qfix::random {

ComplexMatrix ginibre(Engine& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

ComplexMatrix haar_unitary(Engine& rng, Index dim) {
  const ComplexMatrix g = ginibre(rng, dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

DensityMatrix density_matrix(Engine& rng, Index dim, Index rank) {
  const ComplexMatrix g = ginibre(rng, dim, rank > 0 ? rank : dim);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(HermitianOperator::hermitian_part(rho));
}

DensityMatrix pure_state(Engine& rng, Index dim) {
  return DensityMatrix::pure(ginibre(rng, dim, 1).col(0));
}

HermitianOperator hermitian(Engine& rng, Index dim) {
  return HermitianOperator::hermitian_part(ginibre(rng, dim, dim));
}

std::vector<ComplexMatrix> kraus_channel(Engine& rng, Index dim, Index kraus_rank) {
  const ComplexMatrix u = haar_unitary(rng, dim * kraus_rank);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(kraus_rank);
  for (Index a = 0; a < kraus_rank; ++a) kraus.push_back(u.block(a * dim, 0, dim, dim));
  return kraus;
}

}  // namespace qfix::random
