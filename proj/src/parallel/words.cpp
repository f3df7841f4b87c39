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

namespace qfix::kernels {

namespace {

// Probability of word number n: digits of n in base |alphabet|, most
// significant first.
double one_word(const std::vector<RealMatrix>& d, const RealVector& pi, const RealVector& tau, int length,
                std::size_t n) {
  const std::size_t k = d.size();
  std::vector<std::size_t> digits(static_cast<std::size_t>(length));
  for (int pos = length - 1; pos >= 0; --pos) {
    digits[std::size_t(pos)] = n % k;
    n /= k;
  }
  RealVector row = pi;
  for (std::size_t s : digits) row = d[s].transpose() * row;
  return row.dot(tau);
}

}  // namespace

std::vector<double> word_probabilities(const std::vector<RealMatrix>& d, const RealVector& pi,
                                       const RealVector& tau, int length, Execution exec) {
  std::size_t count = 1;
  for (int i = 0; i < length; ++i) count *= d.size();
  std::vector<double> out(count);
  const auto total = static_cast<std::ptrdiff_t>(count);
  if (exec == Execution::kSerial) {
    for (std::ptrdiff_t n = 0; n < total; ++n) out[std::size_t(n)] = one_word(d, pi, tau, length, std::size_t(n));
    return out;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < total; ++n) out[std::size_t(n)] = one_word(d, pi, tau, length, std::size_t(n));
  return out;
}

}  // namespace qfix::kernels
