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

#include "qfix/conesim.hpp"

#include <exception>

namespace qfix::conesim {

std::vector<Trajectory> run_batch(const SimulationConfig& config, const DensityMatrix& rho0,
                                  const std::vector<std::uint64_t>& seeds, Execution exec) {
  config.validate();
  std::vector<Trajectory> out(seeds.size());
  const auto n = static_cast<std::ptrdiff_t>(seeds.size());
  auto one = [&](std::ptrdiff_t i) {
    SimulationConfig c = config;
    c.seed = seeds[std::size_t(i)];
    out[std::size_t(i)] = run(c, rho0);
  };
  if (exec == Execution::kSerial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
    return out;
  }
  // Exceptions must not escape an OpenMP region; rethrow the first afterwards.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      one(i);
    } catch (...) {
#pragma omp critical(qfix_batch_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace qfix::conesim
