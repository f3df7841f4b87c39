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

// Serial reference against the OpenMP kernel for each data-parallel hot spot.
// Run with OMP_NUM_THREADS set to compare scaling.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "qfix/conesim.hpp"
#include "qfix/engineer.hpp"
#include "qfix/kernels.hpp"
#include "qfix/random.hpp"

using namespace qfix;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::kSerial : Execution::kParallel;
}

RealMatrix random_spd(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  RealMatrix a = RealMatrix::NullaryExpr(n, n, [&] { return g(rng); });
  return a * a.transpose() + RealMatrix::Identity(n, n);
}

void BM_SchurComplement(benchmark::State& state) {
  const Index n = state.range(0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<RealMatrix> a;
  for (Index k = 0; k < n; ++k) {
    RealMatrix m = RealMatrix::NullaryExpr(n, n, [&] { return g(rng); });
    a.push_back(m + m.transpose());
  }
  const RealMatrix x = random_spd(rng, n), z_inv = random_spd(rng, n).inverse();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::schur_complement(a, x, z_inv, mode(state)));
}
BENCHMARK(BM_SchurComplement)->ArgsProduct({{16, 32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_WordProbabilities(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  RealMatrix p(3, 3);
  p << 0.8, 0.1, 0.1, 0.2, 0.6, 0.2, 0.3, 0.3, 0.4;
  std::vector<RealMatrix> d;
  for (Index u = 0; u < 3; ++u) {
    RealMatrix m = RealMatrix::Zero(3, 3);
    m.col(u) = p.col(u);
    d.push_back(m);
  }
  const RealVector pi = RealVector::Constant(3, 1.0 / 3.0), tau = RealVector::Ones(3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::word_probabilities(d, pi, tau, length, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(std::pow(3, length)));
}
BENCHMARK(BM_WordProbabilities)->ArgsProduct({{6, 9, 11}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_RunBatch(benchmark::State& state) {
  const engineer::SeparableMultiSpec spec{
      {DensityMatrix::basis(3, 0), DensityMatrix::basis(3, 1), DensityMatrix::basis(3, 2)},
      {HermitianOperator(RealMatrix(RealVector::Unit(3, 0).asDiagonal()).cast<Complex>()),
       HermitianOperator(RealMatrix(RealVector::Unit(3, 1).asDiagonal()).cast<Complex>()),
       HermitianOperator(RealMatrix(RealVector::Unit(3, 2).asDiagonal()).cast<Complex>())},
      DensityMatrix::maximally_mixed(3)};
  conesim::SimulationConfig cfg;
  cfg.channel = engineer::build_separable_multi(spec);
  cfg.kick = conesim::KickPolicy::depolarizing(0.5);
  cfg.n_rounds = 200;
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
  const DensityMatrix rho0 = DensityMatrix::maximally_mixed(3);
  for (auto _ : state) benchmark::DoNotOptimize(conesim::run_batch(cfg, rho0, seeds, mode(state)));
}
BENCHMARK(BM_RunBatch)->ArgsProduct({{4, 16}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
