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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "qfix/nnls.hpp"
#include "qfix/random.hpp"

namespace qfix::conesim {

KickPolicy KickPolicy::fixed(ChoiMatrix c) {
  KickPolicy k;
  k.type = Type::kFixed;
  k.channel = std::move(c);
  return k;
}

KickPolicy KickPolicy::haar_unitary() {
  KickPolicy k;
  k.type = Type::kHaarUnitary;
  return k;
}

KickPolicy KickPolicy::depolarizing(double strength) {
  KickPolicy k;
  k.type = Type::kDepolarizing;
  k.strength = strength;
  return k;
}

void SimulationConfig::validate() const {
  if (n_iter < 1) throw ValidationError("n_iter must be at least 1");
  if (n_rounds < 1) throw ValidationError("n_rounds must be at least 1");
  if (!(classify_tol > 0.0)) throw ValidationError("classify_tol must be positive");
  if (!(fp_tol > 0.0)) throw ValidationError("fp_tol must be positive");
  if (channel.d_in() != channel.d_out()) throw DimensionError("simulated channel must be square");
  if (!is_cptp(channel).cptp()) throw ValidationError("simulated channel is not CPTP");
  switch (kick.type) {
    case KickPolicy::Type::kFixed:
      if (!kick.channel) throw ValidationError("fixed kick needs a channel");
      if (kick.channel->d_in() != channel.d_in() || kick.channel->d_out() != channel.d_out())
        throw DimensionError("kick channel dimension differs from the simulated channel");
      if (!is_cptp(*kick.channel).cptp()) throw ValidationError("kick channel is not CPTP");
      break;
    case KickPolicy::Type::kDepolarizing:
      if (!(kick.strength >= 0.0 && kick.strength <= 1.0))
        throw ValidationError("depolarizing strength must lie in [0, 1]");
      break;
    case KickPolicy::Type::kHaarUnitary:
      break;
  }
}

std::size_t Trajectory::unclassified() const {
  return std::size_t(std::count_if(rounds.begin(), rounds.end(), [](const Round& r) { return !r.symbol; }));
}

std::vector<std::optional<std::size_t>> Trajectory::symbols() const {
  std::vector<std::optional<std::size_t>> out;
  out.reserve(rounds.size());
  for (const auto& r : rounds) out.push_back(r.symbol);
  return out;
}

namespace {

// Real coordinates of a Hermitian matrix: real and imaginary parts stacked.
RealVector real_coords(const ComplexMatrix& m) {
  RealVector v(2 * m.size());
  for (Index i = 0; i < m.size(); ++i) {
    v(i) = m(i).real();
    v(m.size() + i) = m(i).imag();
  }
  return v;
}

bool mutually_orthogonal(const std::vector<DensityMatrix>& states, double tol) {
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      if (std::abs((states[i].matrix() * states[j].matrix()).trace()) > tol) return false;
  return true;
}

class Simulator {
 public:
  Simulator(const SimulationConfig& cfg, std::vector<DensityMatrix> fixed)
      : cfg_(cfg), fixed_(std::move(fixed)), rng_(cfg.seed) {
    const Index d = cfg.channel.d_in();
    basis_ = RealMatrix(2 * d * d, Index(fixed_.size()));
    for (std::size_t i = 0; i < fixed_.size(); ++i) basis_.col(Index(i)) = real_coords(fixed_[i].matrix());
    simplex_ = cfg.collapse && mutually_orthogonal(fixed_, cfg.classify_tol);
    if (cfg.kick.type == KickPolicy::Type::kDepolarizing) depolarizer_ = ChoiMatrix::depolarizing(d, cfg.kick.strength);
  }

  Round step(int index, const DensityMatrix& start) {
    const SettleResult s = settle(cfg_.channel, start, cfg_.n_iter);
    Round r;
    r.index = index;
    r.settle_steps = s.steps;
    r.converged = s.converged;
    r.settled_state = s.state;

    r.distance = std::numeric_limits<double>::infinity();
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < fixed_.size(); ++i) {
      const double dist = trace_distance(s.state, fixed_[i]);
      if (dist < r.distance) r.distance = dist, nearest = i;
    }
    const NnlsResult w = nnls(basis_, real_coords(s.state.matrix()));
    r.weights.assign(w.x.data(), w.x.data() + w.x.size());

    if (r.distance <= cfg_.classify_tol) {
      r.symbol = nearest;
    } else if (simplex_ && w.residual <= cfg_.classify_tol && w.x.sum() > 0.0) {
      const double u = std::uniform_real_distribution<double>(0.0, w.x.sum())(rng_);
      std::size_t j = 0;
      double acc = w.x(0);
      while (j + 1 < fixed_.size() && u >= acc) acc += w.x(Index(++j));
      r.symbol = j;
      r.settled_state = fixed_[j];
    }
    r.post_kick_state = kick(r.settled_state);
    return r;
  }

 private:
  DensityMatrix kick(const DensityMatrix& rho) {
    switch (cfg_.kick.type) {
      case KickPolicy::Type::kFixed:
        return qfix::apply(*cfg_.kick.channel, rho);
      case KickPolicy::Type::kDepolarizing:
        return qfix::apply(*depolarizer_, rho);
      case KickPolicy::Type::kHaarUnitary: {
        const ComplexMatrix u = random::haar_unitary(rng_, rho.dim());
        return DensityMatrix(HermitianOperator::hermitian_part(u * rho.matrix() * u.adjoint()));
      }
    }
    return rho;
  }

  const SimulationConfig& cfg_;
  std::vector<DensityMatrix> fixed_;
  random::Engine rng_;
  RealMatrix basis_;
  bool simplex_ = false;
  std::optional<ChoiMatrix> depolarizer_;
};

}  // namespace

Trajectory run(const SimulationConfig& config, const DensityMatrix& rho0) {
  config.validate();
  if (rho0.dim() != config.channel.d_in()) throw DimensionError("initial state dimension differs from channel");
  Trajectory t;
  t.fixed_points = fixed_points(config.channel, config.fp_tol).states;
  Simulator sim(config, t.fixed_points);
  t.rounds.reserve(std::size_t(config.n_rounds));
  DensityMatrix rho = rho0;
  for (int k = 0; k < config.n_rounds; ++k) {
    t.rounds.push_back(sim.step(k, rho));
    rho = t.rounds.back().post_kick_state;
  }
  return t;
}

EmpiricalProcess estimate_process(const std::vector<std::optional<std::size_t>>& symbols) {
  std::map<std::size_t, Index> slot;
  for (const auto& s : symbols)
    if (s) slot.emplace(*s, 0);
  std::size_t classified = 0;
  for (const auto& s : symbols) classified += s ? 1 : 0;
  if (classified < 2) throw InfeasibleError("too-few-symbols", "need at least two classified rounds");

  EmpiricalProcess e;
  for (auto& [sym, idx] : slot) {
    idx = Index(e.symbols.size());
    e.symbols.push_back(sym);
  }
  const Index k = Index(e.symbols.size());
  e.counts = RealMatrix::Zero(k, k);
  for (std::size_t i = 1; i < symbols.size(); ++i)
    if (symbols[i - 1] && symbols[i]) e.counts(slot[*symbols[i - 1]], slot[*symbols[i]]) += 1.0;

  e.transition = RealMatrix::Zero(k, k);
  for (Index i = 0; i < k; ++i) {
    const double row = e.counts.row(i).sum();
    if (row > 0.0) e.transition.row(i) = e.counts.row(i) / row;
  }
  // Left fixed vector: (T^T - I) pi = 0 with sum(pi) = 1, in least squares.
  RealMatrix a(k + 1, k);
  a.topRows(k) = e.transition.transpose() - RealMatrix::Identity(k, k);
  a.row(k).setOnes();
  RealVector rhs = RealVector::Zero(k + 1);
  rhs(k) = 1.0;
  e.stationary = a.completeOrthogonalDecomposition().solve(rhs);
  return e;
}

EmpiricalProcess estimate_process(const Trajectory& t) { return estimate_process(t.symbols()); }

quasireal::QuasiRealization to_quasi_realization(const EmpiricalProcess& e) {
  const Index k = Index(e.symbols.size());
  std::ostringstream missing;
  for (Index i = 0; i < k; ++i)
    if (e.counts.row(i).sum() == 0.0) missing << (missing.tellp() > 0 ? ", " : "") << e.symbols[std::size_t(i)];
  if (missing.tellp() > 0)
    throw InfeasibleError("unobserved-rows", "no outgoing transitions observed for symbols: " + missing.str());

  quasireal::QuasiRealization q;
  q.dim = k;
  for (auto s : e.symbols) q.alphabet.push_back(std::to_string(s));
  for (Index u = 0; u < k; ++u) {
    RealMatrix m = RealMatrix::Zero(k, k);
    m.col(u) = e.transition.col(u);
    q.d_maps.push_back(m);
  }
  q.pi = e.stationary;
  q.tau = RealVector::Ones(k);
  return q;
}

}  // namespace qfix::conesim
