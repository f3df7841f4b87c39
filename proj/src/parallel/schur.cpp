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

#include "qfix/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qfix::kernels {

namespace {

RealMatrix schur_serial(const std::vector<RealMatrix>& a, const RealMatrix& x, const RealMatrix& z_inv) {
  const Index m = Index(a.size());
  RealMatrix out(m, m);
  for (Index j = 0; j < m; ++j) {
    const RealMatrix g = x * a[std::size_t(j)] * z_inv;
    for (Index i = 0; i < m; ++i) out(i, j) = a[std::size_t(i)].cwiseProduct(g).sum();
  }
  return out;
}

RealMatrix schur_omp(const std::vector<RealMatrix>& a, const RealMatrix& x, const RealMatrix& z_inv) {
  const Index m = Index(a.size());
  RealMatrix out(m, m);
#pragma omp parallel for schedule(dynamic)
  for (Index j = 0; j < m; ++j) {
    const RealMatrix g = x * a[std::size_t(j)] * z_inv;
    for (Index i = 0; i < m; ++i) out(i, j) = a[std::size_t(i)].cwiseProduct(g).sum();
  }
  return out;
}

}  // namespace

RealMatrix schur_complement(const std::vector<RealMatrix>& a, const RealMatrix& x, const RealMatrix& z_inv,
                            Execution exec) {
  return exec == Execution::kSerial ? schur_serial(a, x, z_inv) : schur_omp(a, x, z_inv);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace qfix::kernels
