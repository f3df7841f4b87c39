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

#include "qfix/engineer.hpp"

#include <cmath>
#include <sstream>

namespace qfix::engineer {

namespace {

void require_same_dim(const std::vector<DensityMatrix>& states, Index d, const char* what) {
  for (const auto& s : states)
    if (s.dim() != d) throw DimensionError(std::string(what) + ": states differ in dimension");
}

[[noreturn]] void reject(const ValidityCheck& c) {
  std::ostringstream os;
  os << "condition violated: " << c.name << " " << c.relation << " " << c.threshold << " (value " << c.value
     << ")";
  throw InfeasibleError(c.name, os.str());
}

}  // namespace

bool all_passed(const ValidityLedger& ledger) {
  for (const auto& c : ledger)
    if (c.blocking && !c.passed) return false;
  return true;
}

SingleFixedPointSpec SingleFixedPointSpec::from_states(DensityMatrix sigma, DensityMatrix b) {
  if (sigma.dim() != b.dim()) throw DimensionError("sigma and B differ in dimension");
  const EigenSystem es = herm_eig(sigma.op());
  return SingleFixedPointSpec{std::move(sigma), std::move(b), es.values(0), es.vectors.col(0)};
}

ValidityLedger check_single_fixed_point(const SingleFixedPointSpec& spec) {
  ValidityLedger ledger;
  const double vbv = spec.v_max.dot(spec.b.matrix() * spec.v_max).real();
  ledger.push_back({"<V_max|B|V_max>", "<=", vbv, spec.lambda_max, vbv <= spec.lambda_max + 1e-12});
  const ComplexMatrix gap = spec.sigma.matrix() - (1.0 - spec.lambda_max) * spec.b.matrix();
  const double lo = min_eigenvalue(HermitianOperator::hermitian_part(gap));
  ledger.push_back({"lambda_min(sigma - (1 - lambda_max) B)", ">=", lo, -tol::kPsd, lo >= -tol::kPsd});
  return ledger;
}

ChoiMatrix assemble_single_fixed_point(const SingleFixedPointSpec& spec) {
  const Index d = spec.sigma.dim();
  if (spec.b.dim() != d || spec.v_max.size() != d) throw DimensionError("single fixed point spec dims differ");
  if (!(spec.lambda_max > 0.0)) throw ValidationError("lambda_max must be positive");
  const ComplexMatrix pt = (spec.v_max * spec.v_max.adjoint()).transpose();
  const ComplexMatrix c = kron(spec.sigma.matrix(), pt / spec.lambda_max) +
                          kron(spec.b.matrix(), ComplexMatrix::Identity(d, d) - pt / spec.lambda_max);
  return ChoiMatrix(d, d, HermitianOperator::hermitian_part(c));
}

ChoiMatrix build_single_fixed_point(const SingleFixedPointSpec& spec) {
  for (const auto& c : check_single_fixed_point(spec))
    if (!c.passed) reject(c);
  return assemble_single_fixed_point(spec);
}

DiscriminationResult find_discrimination_projectors(const std::vector<DensityMatrix>& sigmas, double rank_tol) {
  if (sigmas.size() < 2) throw ValidationError("discrimination needs at least two states");
  const Index d = sigmas.front().dim();
  require_same_dim(sigmas, d, "discrimination");

  std::vector<ComplexMatrix> supports;
  DiscriminationResult out;
  for (const auto& s : sigmas) {
    supports.push_back(support_projector(s.op(), rank_tol).matrix());
    out.kernel_dims.push_back(kernel_basis(s.op(), rank_tol).cols());
  }
  ComplexMatrix all = ComplexMatrix::Zero(d, d);
  for (const auto& p : supports) all += p;
  const ComplexMatrix common = kernel_projector(HermitianOperator::hermitian_part(all), rank_tol).matrix();

  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    ComplexMatrix others = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < sigmas.size(); ++j)
      if (j != i) others += supports[j];
    const ComplexMatrix ker = kernel_projector(HermitianOperator::hermitian_part(others), rank_tol).matrix();
    const HermitianOperator pi = HermitianOperator::hermitian_part(ker - common);
    const double t = (pi.matrix() * sigmas[i].matrix()).trace().real();
    out.success.push_back(t);
    out.ranks.push_back(Index(std::lround(pi.trace())));
    out.projectors.push_back(pi);
    if (t <= rank_tol && !out.failed_index) {
      out.failed_index = i;
      std::ostringstream os;
      os << "tr[Pi_" << i << " sigma_" << i << "] = " << t << " <= " << rank_tol << ": the support of sigma_" << i
         << " lies inside the span of the other states' supports";
      out.reason = os.str();
    }
  }
  out.feasible = !out.failed_index.has_value();
  return out;
}

double SeparableMultiSpec::convergence_margin() const {
  double s = 0.0;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const double t = (projectors[i].matrix() * sigmas[i].matrix()).trace().real();
    s += (b.matrix() * projectors[i].matrix()).trace().real() / t;
  }
  return 1.0 - s;
}

ComplexMatrix residual_operator(const SeparableMultiSpec& spec) {
  const Index d = spec.b.dim();
  ComplexMatrix r = ComplexMatrix::Identity(d, d);
  for (std::size_t i = 0; i < spec.sigmas.size(); ++i) {
    const double t = (spec.projectors[i].matrix() * spec.sigmas[i].matrix()).trace().real();
    r -= spec.projectors[i].matrix().transpose() / t;
  }
  return r;
}

namespace {

void validate_shape(const SeparableMultiSpec& spec) {
  if (spec.sigmas.empty()) throw ValidationError("separable construction needs at least one state");
  if (spec.sigmas.size() != spec.projectors.size())
    throw ValidationError("separable construction needs one projector per state");
  const Index d = spec.b.dim();
  require_same_dim(spec.sigmas, d, "separable construction");
  for (const auto& p : spec.projectors)
    if (p.dim() != d) throw DimensionError("separable construction: projector dimension differs");
}

}  // namespace

ValidityLedger check_separable_multi(const SeparableMultiSpec& spec, double rank_tol) {
  validate_shape(spec);
  const std::size_t k = spec.sigmas.size();
  ValidityLedger ledger;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double v = std::abs((spec.sigmas[i].matrix() * spec.projectors[j].matrix()).trace());
      const std::string name = "tr[sigma_" + std::to_string(i) + " Pi_" + std::to_string(j) + "]";
      ledger.push_back({name, "<=", v, rank_tol, v <= rank_tol});
    }
  bool all_success = true;
  for (std::size_t i = 0; i < k; ++i) {
    const double t = (spec.projectors[i].matrix() * spec.sigmas[i].matrix()).trace().real();
    const std::string name = "tr[Pi_" + std::to_string(i) + " sigma_" + std::to_string(i) + "]";
    ledger.push_back({name, ">", t, rank_tol, t > rank_tol});
    all_success = all_success && t > rank_tol;
  }
  if (!all_success) return ledger;

  const ComplexMatrix res = residual_operator(spec);
  const double margin = spec.convergence_margin();
  ValidityCheck bcheck{"sum_i tr[B Pi_i] / tr[Pi_i sigma_i]", "<", 1.0 - margin, 1.0, 1.0 - margin < 1.0};
  if (max_abs(res) <= 1e-9) {
    bcheck.passed = true;
    bcheck.skipped = true;
  }
  ledger.push_back(bcheck);

  const double lo = min_eigenvalue(assemble_separable_multi(spec).op());
  ValidityCheck cp{"lambda_min(C)", ">=", lo, -tol::kPsd, lo >= -tol::kPsd};
  cp.blocking = false;
  ledger.push_back(cp);
  return ledger;
}

ChoiMatrix assemble_separable_multi(const SeparableMultiSpec& spec) {
  validate_shape(spec);
  const Index d = spec.b.dim();
  ComplexMatrix c = ComplexMatrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < spec.sigmas.size(); ++i) {
    const double t = (spec.projectors[i].matrix() * spec.sigmas[i].matrix()).trace().real();
    if (t == 0.0) throw InfeasibleError("zero-success", "tr[Pi_i sigma_i] = 0, cannot normalize");
    c += kron(spec.sigmas[i].matrix(), spec.projectors[i].matrix().transpose() / t);
  }
  c += kron(spec.b.matrix(), residual_operator(spec));
  return ChoiMatrix(d, d, HermitianOperator::hermitian_part(c));
}

ChoiMatrix build_separable_multi(const SeparableMultiSpec& spec, double rank_tol) {
  for (const auto& c : check_separable_multi(spec, rank_tol))
    if (c.blocking && !c.passed) reject(c);
  return assemble_separable_multi(spec);
}

namespace {

// Adds a slack block S = 1 - tr_out[X] >= 0: the variable becomes
// diag(X, S) and each Hermitian basis element E of the input space gives
// tr[(1 (x) E) X] + tr[E S] = tr[E].
sdp::SdpProblem with_completion_slack(const sdp::SdpProblem& p, Index d) {
  const Index n = d * d;
  auto embed = [&](const ComplexMatrix& a, const ComplexMatrix& s) {
    ComplexMatrix m = ComplexMatrix::Zero(n + d, n + d);
    m.topLeftCorner(n, n) = a;
    m.bottomRightCorner(d, d) = s;
    return HermitianOperator::hermitian_part(m);
  };
  sdp::SdpProblem out;
  out.n = n + d;
  out.objective = embed(p.objective.matrix(), ComplexMatrix::Zero(d, d));
  for (const auto& c : p.constraints) out.constraints.push_back({embed(c.a.matrix(), ComplexMatrix::Zero(d, d)), c.b});
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index k = j; k < d; ++k) {
      std::vector<ComplexMatrix> basis;
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      if (j == k) {
        e(j, j) = 1.0;
        basis.push_back(e);
      } else {
        e(j, k) = e(k, j) = 1.0;
        basis.push_back(e);
        e(j, k) = Complex(0.0, 1.0);
        e(k, j) = Complex(0.0, -1.0);
        basis.push_back(e);
      }
      for (const auto& b : basis) out.constraints.push_back({embed(kron(id, b), b), b.trace().real()});
    }
  return out;
}

sdp::SdpSolution solve_or_throw(const sdp::SdpProblem& p, const sdp::SdpOptions& opts) {
  sdp::SdpSolution sol = sdp::solve(p, opts);
  if (sol.status == sdp::SdpStatus::kInfeasible) throw InfeasibleError("sdp-infeasible", sol.message);
  if (sol.status == sdp::SdpStatus::kNumericalLimit) throw NumericalLimitError(sol.message);
  return sol;
}

ComplexMatrix completion(const ComplexMatrix& x, const DensityMatrix& b, Index d) {
  const ComplexMatrix residual = ComplexMatrix::Identity(d, d) - partial_trace(x, d, d, Subsystem::kFirst);
  return x + kron(b.matrix(), residual);
}

}  // namespace

SdpChannel build_via_sdp(const std::vector<DensityMatrix>& sigmas, const DensityMatrix& b,
                         const sdp::SdpOptions& opts) {
  if (sigmas.empty()) throw ValidationError("SDP construction needs at least one state");
  const Index d = b.dim();
  require_same_dim(sigmas, d, "SDP construction");

  const sdp::SdpProblem problem = sdp::assemble_fixed_point_constraints(sigmas);
  sdp::SdpSolution sol = solve_or_throw(problem, opts);
  ComplexMatrix x = sol.x.matrix();
  const double literal_min_eig = min_eigenvalue(HermitianOperator::hermitian_part(completion(x, b, d)));
  const bool constrained = literal_min_eig < -opts.psd_tol;
  if (constrained) {
    sol = solve_or_throw(with_completion_slack(problem, d), opts);
    x = sol.x.matrix().topLeftCorner(d * d, d * d);
  }

  const ChoiMatrix xc(d, d, HermitianOperator::hermitian_part(x));
  const ComplexMatrix residual =
      ComplexMatrix::Identity(d, d) - partial_trace(xc.matrix(), d, d, Subsystem::kFirst);
  const double contraction = qfix::apply(xc, b.matrix()).trace().real();
  SdpChannel out{xc,
                 ChoiMatrix(d, d, HermitianOperator::hermitian_part(completion(xc.matrix(), b, d))),
                 contraction,
                 contraction >= 1.0,
                 std::move(sol),
                 max_abs(residual)};
  out.literal_min_eig = literal_min_eig;
  out.completion_constrained = constrained;
  return out;
}

}  // namespace qfix::engineer
