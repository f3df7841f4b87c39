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

// Shared assertions and seeded generators for the test suites.

#include <doctest.h>

#include <cstdint>

#include "qfix/linops.hpp"
#include "qfix/random.hpp"

namespace qfix::testing {

inline constexpr std::uint64_t kSeed = 20260417;

inline random::Engine engine(std::uint64_t salt = 0) { return random::Engine(kSeed + 7919 * salt); }

inline double diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return max_abs(a - b);
}

inline ComplexMatrix ket_bra(Index dim, Index i, Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

inline ComplexMatrix diag(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(Index(v.size()), Index(v.size()));
  Index k = 0;
  for (double x : v) m(k, k) = x, ++k;
  return m;
}

inline ComplexVector plus() { return ComplexVector::Constant(2, Complex(1.0 / std::sqrt(2.0), 0.0)); }

inline ComplexVector minus() {
  ComplexVector v = plus();
  v(1) = -v(1);
  return v;
}

}  // namespace qfix::testing
