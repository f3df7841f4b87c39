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

#include "qfix/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qfix/kernels.hpp"

namespace qfix::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RealMatrix realify(const ComplexMatrix& m) {
  const Index r = m.rows();
  RealMatrix out(2 * r, 2 * r);
  out.topLeftCorner(r, r) = m.real();
  out.topRightCorner(r, r) = -m.imag();
  out.bottomLeftCorner(r, r) = m.imag();
  out.bottomRightCorner(r, r) = m.real();
  return out;
}

ComplexMatrix complexify(const RealMatrix& y) {
  const Index r = y.rows() / 2;
  ComplexMatrix w(r, r);
  const RealMatrix re = 0.5 * (y.topLeftCorner(r, r) + y.bottomRightCorner(r, r));
  const RealMatrix im = 0.5 * (y.bottomLeftCorner(r, r) - y.topRightCorner(r, r));
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) w(i, j) = Complex(re(i, j), im(i, j));
  return 0.5 * (w + w.adjoint());
}

RealVector svec(const RealMatrix& a) {
  const Index n = a.rows();
  RealVector v(n * (n + 1) / 2);
  Index k = 0;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i) v(k++) = (i == j) ? a(i, j) : std::sqrt(2.0) * a(i, j);
  return v;
}

RealMatrix sym(const RealMatrix& a) { return 0.5 * (a + a.transpose()); }

// Largest alpha with x + alpha * d >= 0 (x positive definite).
double max_step(const RealMatrix& x, const RealMatrix& d) {
  Eigen::LLT<RealMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const RealMatrix linv = llt.matrixL().solve(RealMatrix::Identity(x.rows(), x.cols()));
  const RealMatrix w = sym(linv * d * linv.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(w, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  return lo < 0.0 ? -1.0 / lo : kInf;
}

double inner(const RealMatrix& a, const RealMatrix& b) { return a.cwiseProduct(b).sum(); }

struct RealProblem {
  RealMatrix c;
  std::vector<RealMatrix> a;
  RealVector b;
};

struct IpResult {
  RealMatrix x;
  RealVector y;
  RealMatrix z;
  int iterations = 0;
  double rel_primal = kInf;
  double rel_dual = kInf;
  double rel_gap = kInf;
  double dual_residual = kInf;
  bool infeasible = false;
  RealVector certificate;
};

RealVector op_a(const std::vector<RealMatrix>& a, const RealMatrix& x) {
  RealVector v(Index(a.size()));
  for (std::size_t k = 0; k < a.size(); ++k) v(Index(k)) = inner(a[k], x);
  return v;
}

RealMatrix op_at(const std::vector<RealMatrix>& a, const RealVector& y, Index n) {
  RealMatrix s = RealMatrix::Zero(n, n);
  for (std::size_t k = 0; k < a.size(); ++k) s += y(Index(k)) * a[k];
  return s;
}

IpResult path_following(const RealProblem& p, const SdpOptions& opts) {
  const Index n = p.c.rows();
  const Index m = Index(p.a.size());
  const double nb = p.b.norm();
  const double nc = p.c.norm();

  double xi_p = std::max(10.0, std::sqrt(double(n)));
  double xi_d = std::max({10.0, std::sqrt(double(n)), nc});
  for (Index k = 0; k < m; ++k) {
    const double na = p.a[std::size_t(k)].norm();
    xi_p = std::max(xi_p, double(n) * (1.0 + std::abs(p.b(k))) / (1.0 + na));
    xi_d = std::max(xi_d, na);
  }

  IpResult r;
  r.x = xi_p * RealMatrix::Identity(n, n);
  r.z = xi_d * RealMatrix::Identity(n, n);
  r.y = RealVector::Zero(m);

  IpResult best = r;
  double best_merit = kInf;
  int stall = 0;
  const Execution exec = opts.parallel ? Execution::kParallel : Execution::kSerial;

  for (int it = 0; it <= opts.max_iter; ++it) {
    const RealVector rp = p.b - op_a(p.a, r.x);
    const RealMatrix rd = p.c - r.z - op_at(p.a, r.y, n);
    const double pobj = inner(p.c, r.x);
    const double dobj = p.b.dot(r.y);
    const double xz = inner(r.x, r.z);
    const double mu = xz / double(n);
    r.iterations = it;
    r.rel_primal = rp.norm() / (1.0 + nb);
    r.rel_dual = rd.norm() / (1.0 + nc);
    r.rel_gap = std::abs(xz) / (1.0 + std::abs(pobj) + std::abs(dobj));
    r.dual_residual = rd.norm();

    const double merit = std::max({r.rel_primal, r.rel_dual, r.rel_gap});
    if (merit < best_merit * 0.999) {
      best = r;
      best_merit = merit;
      stall = 0;
    } else if (++stall > 8) {
      break;
    }
    if (r.rel_primal <= 1e-12 && r.rel_dual <= 1e-12 && r.rel_gap <= 1e-11) break;
    if (it == opts.max_iter) break;

    // Primal infeasibility: the dual objective diverges along a ray with
    // sum y_k A_k <= 0.
    if (dobj > 1e10 * (1.0 + nc) && r.y.norm() > 1e8) {
      const RealVector ray = r.y / dobj;
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(op_at(p.a, ray, n)), Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(n - 1) <= 1e-6 * std::max(1.0, ray.norm())) {
        best = r;
        best.infeasible = true;
        best.certificate = ray;
        return best;
      }
    }

    Eigen::LLT<RealMatrix> zllt(r.z);
    if (zllt.info() != Eigen::Success) break;
    const RealMatrix z_inv = sym(zllt.solve(RealMatrix::Identity(n, n)));
    RealMatrix schur = kernels::schur_complement(p.a, r.x, z_inv, exec);
    schur = sym(schur);
    schur.diagonal().array() += 1e-15 * std::max(1.0, schur.diagonal().maxCoeff());
    Eigen::LDLT<RealMatrix> mfac(schur);
    if (mfac.info() != Eigen::Success) break;

    const RealMatrix x_rd_zinv = r.x * rd * z_inv;
    const RealVector base = op_a(p.a, x_rd_zinv);

    auto direction = [&](double sigma_mu, const RealMatrix* corr, RealMatrix& dx, RealVector& dy,
                         RealMatrix& dz) {
      RealMatrix target = sigma_mu * z_inv - r.x;
      if (corr != nullptr) target -= *corr;
      dy = mfac.solve(rp - op_a(p.a, target) + base);
      dz = sym(rd - op_at(p.a, dy, n));
      dx = sym(target - r.x * dz * z_inv);
    };

    RealMatrix dx_a, dz_a;
    RealVector dy_a;
    direction(0.0, nullptr, dx_a, dy_a, dz_a);
    const double ap_a = std::min(1.0, max_step(r.x, dx_a));
    const double ad_a = std::min(1.0, max_step(r.z, dz_a));
    const double mu_a = inner(r.x + ap_a * dx_a, r.z + ad_a * dz_a) / double(n);
    const double sigma = std::clamp(std::pow(std::max(mu_a, 0.0) / mu, 3.0), 0.0, 1.0);

    const RealMatrix corr = dx_a * dz_a * z_inv;
    RealMatrix dx, dz;
    RealVector dy;
    direction(sigma * mu, &corr, dx, dy, dz);

    const double gamma = 0.9 + 0.09 * std::min(ap_a, ad_a);
    const double ap = std::min(1.0, gamma * max_step(r.x, dx));
    const double ad = std::min(1.0, gamma * max_step(r.z, dz));
    if (!(ap > 1e-12 || ad > 1e-12)) break;
    r.x = sym(r.x + ap * dx);
    r.y += ad * dy;
    r.z = sym(r.z + ad * dz);
  }
  return best;
}

// Orthonormal basis (columns) of the eigenspace of h with |lambda| <= tol.
ComplexMatrix small_eigenspace(const ComplexMatrix& h, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  std::vector<Index> keep;
  for (Index i = 0; i < h.rows(); ++i)
    if (std::abs(es.eigenvalues()(i)) <= tol) keep.push_back(i);
  ComplexMatrix out(h.rows(), Index(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(Index(k)) = es.eigenvectors().col(keep[k]);
  return out;
}

// Face of the PSD cone containing every feasible X: constraints with b = 0 and
// a semidefinite A force A X = 0.
ComplexMatrix reduce_face(const SdpProblem& p) {
  double bscale = 1.0;
  for (const auto& c : p.constraints) bscale = std::max(bscale, std::abs(c.b));
  ComplexMatrix v = ComplexMatrix::Identity(p.n, p.n);
  bool changed = true;
  while (changed && v.cols() > 0) {
    changed = false;
    for (const auto& c : p.constraints) {
      if (std::abs(c.b) > 1e-12 * bscale) continue;
      const ComplexMatrix ar = v.adjoint() * c.a.matrix() * v;
      const double scale = max_abs(ar);
      if (scale <= 1e-13) continue;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (ar + ar.adjoint()), Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues()(0);
      const double hi = es.eigenvalues()(ar.rows() - 1);
      if (lo < -1e-12 * scale && hi > 1e-12 * scale) continue;
      const ComplexMatrix ker = small_eigenspace(ar, 1e-10 * scale);
      if (ker.cols() < v.cols()) {
        v = v * ker;
        changed = true;
        if (v.cols() == 0) break;
      }
    }
  }
  return v;
}

}  // namespace

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal:
      return "optimal";
    case SdpStatus::kInfeasible:
      return "infeasible";
    case SdpStatus::kNumericalLimit:
      return "numerical-limit";
  }
  return "unknown";
}

void SdpProblem::validate() const {
  if (n < 1) throw ValidationError("SDP variable dimension must be positive");
  if (objective.dim() != n) throw DimensionError("SDP objective dimension differs from n");
  if (constraints.empty()) throw ValidationError("SDP needs at least one constraint");
  for (const auto& c : constraints) {
    if (c.a.dim() != n) throw DimensionError("SDP constraint matrix dimension differs from n");
    if (!std::isfinite(c.b)) throw ValidationError("SDP constraint right-hand side is not finite");
  }
}

SdpProblem assemble_fixed_point_constraints(const std::vector<DensityMatrix>& sigmas) {
  if (sigmas.empty()) throw ValidationError("fixed-point SDP needs at least one state");
  const Index d = sigmas.front().dim();
  for (const auto& s : sigmas)
    if (s.dim() != d) throw DimensionError("fixed-point SDP states differ in dimension");

  SdpProblem p;
  p.n = d * d;
  p.objective = HermitianOperator::identity(p.n);
  const Complex i_unit(0.0, 1.0);
  for (const auto& sigma : sigmas) {
    const ComplexMatrix v = herm_eig(sigma.op()).vectors;
    const ComplexMatrix sigma_t = sigma.matrix().transpose();
    std::vector<ComplexMatrix> basis;
    for (Index k = 0; k < d; ++k) basis.push_back(v.col(k) * v.col(k).adjoint());
    for (Index k = 0; k < d; ++k)
      for (Index l = k + 1; l < d; ++l) {
        const ComplexMatrix kl = v.col(k) * v.col(l).adjoint();
        basis.push_back(kl + kl.adjoint());
        basis.push_back(i_unit * (kl - kl.adjoint()));
      }
    for (const auto& e : basis) {
      Constraint c{HermitianOperator::hermitian_part(kron(e, sigma_t)), (e * sigma.matrix()).trace().real()};
      const bool repeated = std::any_of(p.constraints.begin(), p.constraints.end(), [&](const Constraint& o) {
        return o.b == c.b && o.a.matrix() == c.a.matrix();
      });
      if (!repeated) p.constraints.push_back(std::move(c));
    }
  }
  return p;
}

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts) {
  p.validate();
  const std::size_t m_all = p.constraints.size();
  SdpSolution sol;
  sol.x = HermitianOperator::zero(p.n);

  auto finish_residuals = [&](const ComplexMatrix& x) {
    double res = 0.0;
    for (const auto& c : p.constraints) res = std::max(res, std::abs((c.a.matrix() * x).trace().real() - c.b));
    sol.primal_residual = res;
    sol.objective_value = -(p.objective.matrix().transpose() * x).trace().real();
  };

  const ComplexMatrix face = reduce_face(p);
  const Index r = face.cols();
  sol.face_dim = r;
  if (r == 0) {
    finish_residuals(ComplexMatrix::Zero(p.n, p.n));
    sol.status = sol.primal_residual <= opts.feas_tol ? SdpStatus::kOptimal : SdpStatus::kInfeasible;
    sol.message = "constraints force X = 0";
    sol.dual.assign(m_all, 0.0);
    return sol;
  }

  // Reduced complex data and its real embedding.
  std::vector<ComplexMatrix> ared;
  ared.reserve(m_all);
  for (const auto& c : p.constraints) ared.push_back(face.adjoint() * c.a.matrix() * face);
  const ComplexMatrix cred = face.adjoint() * p.objective.matrix().transpose() * face;

  RealProblem rp;
  rp.c = 0.5 * realify(cred);
  std::vector<RealMatrix> aall;
  aall.reserve(m_all);
  for (const auto& a : ared) aall.push_back(0.5 * realify(a));
  RealVector ball(static_cast<Index>(m_all));
  for (std::size_t k = 0; k < m_all; ++k) ball(Index(k)) = p.constraints[k].b;

  // Linear consistency and redundant rows.
  const Index nv = 2 * r * (2 * r + 1) / 2;
  RealMatrix amat(Index(m_all), nv);
  for (std::size_t k = 0; k < m_all; ++k) amat.row(Index(k)) = svec(aall[k]).transpose();
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(amat);
  cod.setThreshold(1e-10);
  const RealVector xls = cod.solve(ball);
  const RealVector resid = ball - amat * xls;
  if (resid.norm() > 1e-9 * (1.0 + ball.norm())) {
    sol.status = SdpStatus::kInfeasible;
    sol.certificate = std::vector<double>(resid.data(), resid.data() + resid.size());
    std::ostringstream os;
    os << "equality constraints are inconsistent (least-squares residual " << resid.norm() << ")";
    sol.message = os.str();
    finish_residuals(ComplexMatrix::Zero(p.n, p.n));
    return sol;
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(amat.transpose());
  qr.setThreshold(1e-10);
  const Index rank = qr.rank();
  std::vector<Index> keep;
  for (Index k = 0; k < rank; ++k) keep.push_back(qr.colsPermutation().indices()(k));
  std::sort(keep.begin(), keep.end());
  if (keep.empty()) {
    // Every constraint is 0 = 0 on the face; X = 0 is optimal for F0 >= 0.
    finish_residuals(ComplexMatrix::Zero(p.n, p.n));
    sol.status = SdpStatus::kOptimal;
    sol.dual.assign(m_all, 0.0);
    sol.message = "constraints vanish on the feasible face";
    return sol;
  }
  rp.b.resize(Index(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    rp.a.push_back(aall[std::size_t(keep[k])]);
    rp.b(Index(k)) = ball(keep[k]);
  }

  const IpResult ip = path_following(rp, opts);
  sol.iterations = ip.iterations;
  sol.dual_residual = ip.dual_residual;
  sol.gap = ip.rel_gap;

  if (ip.infeasible) {
    std::vector<double> cert(m_all, 0.0);
    for (std::size_t k = 0; k < keep.size(); ++k) cert[std::size_t(keep[k])] = ip.certificate(Index(k));
    sol.certificate = cert;
    sol.status = SdpStatus::kInfeasible;
    sol.message = "no positive semidefinite X satisfies the constraints";
    finish_residuals(ComplexMatrix::Zero(p.n, p.n));
    return sol;
  }

  ComplexMatrix w = complexify(ip.x);
  // Least-norm correction back onto the affine constraint set, kept only if
  // it stays inside the cone.
  {
    const Index mk = Index(keep.size());
    RealMatrix gram(mk, mk);
    RealVector res(mk);
    for (Index i = 0; i < mk; ++i) {
      const ComplexMatrix& ai = ared[std::size_t(keep[std::size_t(i)])];
      res(i) = rp.b(i) - (ai * w).trace().real();
      for (Index j = 0; j < mk; ++j)
        gram(i, j) = (ai * ared[std::size_t(keep[std::size_t(j)])]).trace().real();
    }
    const RealVector coef = gram.completeOrthogonalDecomposition().solve(res);
    ComplexMatrix corr = ComplexMatrix::Zero(r, r);
    for (Index i = 0; i < mk; ++i) corr += coef(i) * ared[std::size_t(keep[std::size_t(i)])];
    const ComplexMatrix polished = w + 0.5 * (corr + corr.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(polished, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) >= -opts.psd_tol) w = polished;
  }

  const ComplexMatrix x = face * w * face.adjoint();
  sol.x = HermitianOperator::hermitian_part(x);
  finish_residuals(sol.x.matrix());
  sol.dual.assign(m_all, 0.0);
  for (std::size_t k = 0; k < keep.size(); ++k) sol.dual[std::size_t(keep[k])] = ip.y(Index(k));

  const EigenSystem es = herm_eig(sol.x);
  const double top = std::max(1.0, es.values(0));
  sol.rank = 0;
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > tol::kRank * top) ++sol.rank;
  const double lo = es.values(es.values.size() - 1);

  const bool ok = sol.primal_residual <= opts.feas_tol && ip.rel_dual <= opts.feas_tol &&
                  ip.rel_gap <= opts.feas_tol && lo >= -opts.psd_tol;
  sol.status = ok ? SdpStatus::kOptimal : SdpStatus::kNumericalLimit;
  if (!ok) {
    std::ostringstream os;
    os << "tolerances not met after " << ip.iterations << " iterations (primal " << sol.primal_residual
       << ", dual " << ip.rel_dual << ", gap " << ip.rel_gap << ", min eig " << lo << ")";
    sol.message = os.str();
  }
  return sol;
}

}  // namespace qfix::sdp
