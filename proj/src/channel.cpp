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

#include "qfix/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qfix {

namespace {

ComplexMatrix omega(Index d) {
  // sum_ij |i><j| (x) |i><j| = |w><w| with w = sum_i |i>|i>.
  ComplexVector w = ComplexVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) w(i * d + i) = 1.0;
  return w * w.adjoint();
}

// Real coordinates of a Hermitian operator: (Re m, Im m) flattened.
RealVector realify(const ComplexMatrix& m) {
  RealVector v(2 * m.size());
  for (Index i = 0; i < m.size(); ++i) {
    v(2 * i) = m.data()[i].real();
    v(2 * i + 1) = m.data()[i].imag();
  }
  return v;
}

ComplexMatrix unrealify(const RealVector& v, Index d) {
  ComplexMatrix m(d, d);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(v(2 * i), v(2 * i + 1));
  return m;
}

// Orthonormal basis of the column span of a, columns with singular value
// above rel_tol * largest.
RealMatrix column_span(const RealMatrix& a, double rel_tol) {
  if (a.cols() == 0) return RealMatrix(a.rows(), 0);
  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double top = s.size() > 0 ? s(0) : 0.0;
  Index r = 0;
  while (r < s.size() && s(r) > rel_tol * std::max(top, 1e-300)) ++r;
  if (top == 0.0) r = 0;
  return svd.matrixU().leftCols(r);
}

RealMatrix null_space(const RealMatrix& a, double rel_tol) {
  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double top = s.size() > 0 ? std::max(s(0), 1.0) : 1.0;
  Index r = 0;
  while (r < s.size() && s(r) > rel_tol * top) ++r;
  return svd.matrixV().rightCols(a.cols() - r);
}

// Hermitian, unit-trace cleanup of a state that is PSD up to round-off.
DensityMatrix clean_state(const ComplexMatrix& m, double floor) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  RealVector w = es.eigenvalues();
  for (Index i = 0; i < w.size(); ++i)
    if (w(i) < floor) w(i) = 0.0;
  w /= w.sum();
  const ComplexMatrix v = es.eigenvectors();
  return DensityMatrix(HermitianOperator::hermitian_part(v * w.cast<Complex>().asDiagonal() * v.adjoint()));
}

class FixedSpace {
 public:
  FixedSpace(std::vector<ComplexMatrix> basis, Index d) : basis_(std::move(basis)), d_(d) {}

  Index size() const { return Index(basis_.size()); }

  ComplexMatrix combine(const RealVector& c) const {
    ComplexMatrix h = ComplexMatrix::Zero(d_, d_);
    for (Index j = 0; j < size(); ++j) h += c(j) * basis_[j];
    return h;
  }

  RealVector coordinates(const ComplexMatrix& h) const {
    RealVector c(size());
    for (Index j = 0; j < size(); ++j) c(j) = (basis_[j].adjoint() * h).trace().real();
    return c;
  }

  // Walks from rho along the projection of guide onto fixed, traceless
  // directions supported on supp(rho) until no such direction remains.
  DensityMatrix extreme_point(DensityMatrix rho, const RealVector& guide) const {
    const RealVector gcoords = guide;
    for (Index step = 0; step <= d_; ++step) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
      Index r = 0;
      for (Index i = 0; i < d_; ++i)
        if (es.eigenvalues()(i) > kSupportTol) ++r;
      const ComplexMatrix u = es.eigenvectors().rightCols(r);
      const ComplexMatrix q = ComplexMatrix::Identity(d_, d_) - u * u.adjoint();

      RealMatrix constraints(2 * d_ * d_ + 1, size());
      for (Index j = 0; j < size(); ++j) {
        constraints.col(j).head(2 * d_ * d_) = realify(q * basis_[j]);
        constraints(2 * d_ * d_, j) = basis_[j].trace().real();
      }
      const RealMatrix free = null_space(constraints, 1e-9);
      if (free.cols() == 0) return rho;

      RealVector c = free * (free.transpose() * gcoords);
      if (c.norm() < 1e-9) c = free.col(0);
      const ComplexMatrix dir = combine(c);

      const ComplexMatrix rs = u.adjoint() * rho.matrix() * u;
      const ComplexMatrix ds = u.adjoint() * dir * u;
      Eigen::LLT<ComplexMatrix> llt(0.5 * (rs + rs.adjoint()));
      const ComplexMatrix linv = llt.matrixL().solve(ComplexMatrix::Identity(r, r));
      const ComplexMatrix g = linv * ds * linv.adjoint();
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> ges(0.5 * (g + g.adjoint()), Eigen::EigenvaluesOnly);
      const double mu = ges.eigenvalues()(0);
      if (mu >= -1e-14) return rho;
      rho = clean_state(rho.matrix() - dir / mu, 1e-12);
    }
    return rho;
  }

  static constexpr double kSupportTol = 1e-10;

 private:
  std::vector<ComplexMatrix> basis_;
  Index d_;
};

Index span_rank(const std::vector<DensityMatrix>& states) {
  if (states.empty()) return 0;
  RealMatrix a(2 * states[0].matrix().size(), Index(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) a.col(Index(i)) = realify(states[i].matrix());
  return column_span(a, 1e-8).cols();
}

}  // namespace

ChoiMatrix::ChoiMatrix(Index d_in, Index d_out, HermitianOperator m)
    : d_in_(d_in), d_out_(d_out), m_(std::move(m)) {
  if (d_in < 1 || d_out < 1 || m_.dim() != d_in * d_out) {
    std::ostringstream os;
    os << "Choi matrix of dimension " << m_.dim() << " does not match d_in=" << d_in
       << ", d_out=" << d_out;
    throw DimensionError(os.str());
  }
}

ChoiMatrix ChoiMatrix::identity(Index dim) {
  return ChoiMatrix(dim, dim, HermitianOperator::hermitian_part(omega(dim)));
}

ChoiMatrix ChoiMatrix::from_kraus(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw ValidationError("Kraus decomposition needs at least one operator");
  const Index d_out = kraus[0].rows();
  const Index d_in = kraus[0].cols();
  ComplexMatrix c = ComplexMatrix::Zero(d_out * d_in, d_out * d_in);
  for (const auto& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in) throw DimensionError("Kraus operators differ in shape");
    const ComplexVector v = vec_row_major(k);
    c += v * v.adjoint();
  }
  return ChoiMatrix(d_in, d_out, HermitianOperator::hermitian_part(c));
}

ChoiMatrix ChoiMatrix::from_superoperator(const ComplexMatrix& s, Index d_in, Index d_out) {
  if (s.rows() != d_out * d_out || s.cols() != d_in * d_in)
    throw DimensionError("superoperator shape does not match channel dims");
  ComplexMatrix c(d_out * d_in, d_out * d_in);
  for (Index a = 0; a < d_out; ++a)
    for (Index i = 0; i < d_in; ++i)
      for (Index b = 0; b < d_out; ++b)
        for (Index j = 0; j < d_in; ++j) c(a * d_in + i, b * d_in + j) = s(a * d_out + b, i * d_in + j);
  return ChoiMatrix(d_in, d_out, HermitianOperator(c));
}

ChoiMatrix ChoiMatrix::depolarizing(Index dim, double strength) {
  if (!(strength >= 0.0 && strength <= 1.0)) throw ValidationError("depolarizing strength must lie in [0, 1]");
  const ComplexMatrix c = (1.0 - strength) * omega(dim) +
                          strength / double(dim) * ComplexMatrix::Identity(dim * dim, dim * dim);
  return ChoiMatrix(dim, dim, HermitianOperator::hermitian_part(c));
}

ComplexMatrix apply(const ChoiMatrix& c, const ComplexMatrix& x) {
  const Index di = c.d_in();
  const Index dout = c.d_out();
  if (x.rows() != di || x.cols() != di) {
    std::ostringstream os;
    os << "channel with d_in=" << di << " applied to a " << x.rows() << "x" << x.cols() << " operator";
    throw DimensionError(os.str());
  }
  const ComplexMatrix& m = c.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (Index a = 0; a < dout; ++a)
    for (Index b = 0; b < dout; ++b) out(a, b) = m.block(a * di, b * di, di, di).cwiseProduct(x).sum();
  return out;
}

DensityMatrix apply(const ChoiMatrix& c, const DensityMatrix& rho) {
  return DensityMatrix(HermitianOperator(apply(c, rho.matrix())));
}

CptpReport is_cptp(const ChoiMatrix& c, double psd_tol, double tp_tol) {
  CptpReport r;
  r.min_eig = min_eigenvalue(c.op());
  r.cp = r.min_eig >= -psd_tol;
  const ComplexMatrix reduced = partial_trace(c.matrix(), c.d_out(), c.d_in(), Subsystem::kFirst);
  r.tp_residual = max_abs(reduced - ComplexMatrix::Identity(c.d_in(), c.d_in()));
  r.tp = r.tp_residual <= tp_tol;
  return r;
}

ComplexMatrix superoperator(const ChoiMatrix& c) {
  const Index di = c.d_in();
  const Index dout = c.d_out();
  const ComplexMatrix& m = c.matrix();
  ComplexMatrix s(dout * dout, di * di);
  for (Index a = 0; a < dout; ++a)
    for (Index b = 0; b < dout; ++b)
      for (Index i = 0; i < di; ++i)
        for (Index j = 0; j < di; ++j) s(a * dout + b, i * di + j) = m(a * di + i, b * di + j);
  return s;
}

FixedPointSet fixed_points(const ChoiMatrix& c, double fp_tol) {
  if (c.d_in() != c.d_out()) throw DimensionError("fixed points need a channel with d_in == d_out");
  const CptpReport rep = is_cptp(c);
  if (!rep.cptp()) {
    std::ostringstream os;
    os << "fixed points need a CPTP map (min eig " << rep.min_eig << ", tp residual " << rep.tp_residual
       << ")";
    throw InfeasibleError("not-cptp", os.str());
  }
  const Index d = c.d_in();
  const Index n = d * d;
  const ComplexMatrix s = superoperator(c);
  const ComplexMatrix k = s - ComplexMatrix::Identity(n, n);

  FixedPointSet out;
  {
    Eigen::ComplexEigenSolver<ComplexMatrix> ces(s, false);
    const double ptol = std::max(fp_tol, 1e-10);
    for (Index i = 0; i < n; ++i) {
      const Complex lam = ces.eigenvalues()(i);
      if (std::abs(std::abs(lam) - 1.0) <= ptol) out.peripheral_spectrum.push_back(lam);
    }
    std::sort(out.peripheral_spectrum.begin(), out.peripheral_spectrum.end(),
              [](Complex a, Complex b) { return std::arg(a) == std::arg(b) ? a.real() > b.real()
                                                                            : std::abs(std::arg(a)) < std::abs(std::arg(b)); });
  }

  Eigen::JacobiSVD<ComplexMatrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  while (rank < n && sv(rank) > fp_tol) ++rank;
  const Index m = n - rank;
  out.fixed_space_dim = m;
  if (m == 0) throw NumericalLimitError("no eigenvalue of the superoperator within fp_tol of 1");
  const ComplexMatrix right = svd.matrixV().rightCols(m);
  const ComplexMatrix left = svd.matrixU().rightCols(m);

  // Hermitian real basis of the fixed space (closed under adjoint).
  RealMatrix herm(2 * n, 2 * m);
  for (Index j = 0; j < m; ++j) {
    const ComplexMatrix x = unvec_row_major(right.col(j), d, d);
    herm.col(2 * j) = realify(0.5 * (x + x.adjoint()));
    herm.col(2 * j + 1) = realify(Complex(0.0, -0.5) * (x - x.adjoint()));
  }
  const RealMatrix span = column_span(herm, 1e-8);
  std::vector<ComplexMatrix> basis;
  for (Index j = 0; j < span.cols(); ++j) {
    const ComplexMatrix h = unrealify(span.col(j), d);
    basis.push_back(0.5 * (h + h.adjoint()));
  }
  const FixedSpace space(basis, d);

  // Spectral projector onto the fixed space applied to 1/d gives a fixed
  // state whose support contains that of every other fixed state.
  const ComplexMatrix overlap = left.adjoint() * right;
  Eigen::FullPivLU<ComplexMatrix> lu(overlap);
  if (!lu.isInvertible()) throw NumericalLimitError("eigenvalue 1 of the superoperator is not semisimple");
  const ComplexVector mixed = vec_row_major(ComplexMatrix::Identity(d, d) / double(d));
  const ComplexVector central = right * lu.solve(left.adjoint() * mixed);
  const DensityMatrix center = clean_state(unvec_row_major(central, d, d), 0.0);

  std::vector<DensityMatrix> found;
  auto add = [&](const DensityMatrix& e) {
    for (const auto& f : found)
      if (trace_distance(f, e) <= 1e-6) return;
    found.push_back(e);
  };
  for (Index attempt = 0; attempt < 2 * space.size() + 2 && span_rank(found) < space.size(); ++attempt) {
    RealMatrix done(space.size(), Index(found.size()));
    for (std::size_t i = 0; i < found.size(); ++i) done.col(Index(i)) = space.coordinates(found[i].matrix());
    const RealMatrix q = column_span(done, 1e-8);
    RealVector guide;
    double best = -1.0;
    for (Index j = 0; j < space.size(); ++j) {
      RealVector e = RealVector::Unit(space.size(), j);
      if (q.cols() > 0) e -= q * (q.transpose() * e);
      if (e.norm() > best + 1e-12) {
        best = e.norm();
        guide = e;
      }
    }
    add(space.extreme_point(center, guide));
    add(space.extreme_point(center, -guide));
  }
  if (found.empty()) found.push_back(center);

  for (const auto& st : found) {
    const double res =
        0.5 * trace_norm(HermitianOperator::hermitian_part(apply(c, st.matrix()) - st.matrix()));
    if (res <= fp_tol) {
      out.states.push_back(st);
      out.eigenvalue_residuals.push_back(res);
    }
  }
  if (out.states.empty()) throw NumericalLimitError("fixed-state extraction lost accuracy beyond fp_tol");
  return out;
}

std::vector<DensityMatrix> iterate(const ChoiMatrix& c, const DensityMatrix& rho0, int n) {
  if (n < 1) throw ValidationError("iterate needs n >= 1");
  std::vector<DensityMatrix> out;
  out.reserve(std::size_t(n));
  DensityMatrix rho = rho0;
  for (int k = 0; k < n; ++k) {
    rho = apply(c, rho);
    out.push_back(rho);
  }
  return out;
}

SettleResult settle(const ChoiMatrix& c, const DensityMatrix& rho0, int max_steps, double converge_tol) {
  if (max_steps < 1) throw ValidationError("settle needs max_steps >= 1");
  DensityMatrix rho = rho0;
  for (int k = 1; k <= max_steps; ++k) {
    DensityMatrix next = apply(c, rho);
    const double step = trace_distance(rho, next);
    rho = std::move(next);
    if (step <= converge_tol) return {rho, k, true};
  }
  return {rho, max_steps, false};
}

}  // namespace qfix
