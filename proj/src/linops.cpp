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

#include "qfix/linops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qfix {

namespace {

void phase_fix(Eigen::Ref<ComplexVector> v) {
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-12) {
      v *= std::conj(v(i)) / mag;
      return;
    }
  }
}

// Canonical orthonormal basis of the column span of u (orthonormal columns).
ComplexMatrix canonical_cluster_basis(const ComplexMatrix& u) {
  const Index d = u.rows();
  const Index k = u.cols();
  const ComplexMatrix p = u * u.adjoint();
  ComplexMatrix out(d, k);
  Index found = 0;
  for (Index j = 0; j < d && found < k; ++j) {
    ComplexVector v = p.col(j);
    for (Index q = 0; q < found; ++q) v -= out.col(q) * out.col(q).dot(v);
    const double n = v.norm();
    if (n > 1e-3) {
      out.col(found++) = v / n;
    }
  }
  if (found < k) return u;  // cannot happen for an orthonormal u
  for (Index q = 0; q < k; ++q) phase_fix(out.col(q));
  return out;
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double herm_tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << "Hermitian operator must be square and non-empty, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
  if (!all_finite(m)) throw ValidationError("matrix has non-finite entries");
  const double asym = max_abs(m - m.adjoint());
  if (asym > herm_tol * std::max(1.0, max_abs(m))) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max|A - A^dagger| = " << asym;
    throw ValidationError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(Unchecked{}, ComplexMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Unchecked{}, ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::hermitian_part(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) throw DimensionError("Hermitian part of a non-square matrix");
  return HermitianOperator(Unchecked{}, 0.5 * (m + m.adjoint()));
}

DensityMatrix::DensityMatrix(HermitianOperator op, double psd_tol) : op_(std::move(op)) {
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > psd_tol) {
    std::ostringstream os;
    os << "density matrix must have unit trace, got " << tr;
    throw ValidationError(os.str());
  }
  const double lo = min_eigenvalue(op_);
  if (lo < -psd_tol) {
    std::ostringstream os;
    os << "density matrix must be positive semidefinite, min eigenvalue " << lo;
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(HermitianOperator(ComplexMatrix::Identity(dim, dim) / double(dim)));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (n == 0.0 || !std::isfinite(n)) throw ValidationError("pure state needs a nonzero finite vector");
  const ComplexVector u = psi / n;
  return DensityMatrix(HermitianOperator::hermitian_part(u * u.adjoint()));
}

DensityMatrix DensityMatrix::basis(Index dim, Index k) {
  if (k < 0 || k >= dim) throw DimensionError("basis index out of range");
  ComplexVector e = ComplexVector::Zero(dim);
  e(k) = 1.0;
  return pure(e);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Index d1, Index d2, Subsystem over) {
  if (d1 < 1 || d2 < 1 || m.rows() != d1 * d2 || m.cols() != d1 * d2) {
    std::ostringstream os;
    os << "partial trace: " << m.rows() << "x" << m.cols() << " operator does not match dims (" << d1
       << ", " << d2 << ")";
    throw DimensionError(os.str());
  }
  if (over == Subsystem::kSecond) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Index i = 0; i < d1; ++i)
      for (Index j = 0; j < d1; ++j)
        out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Index i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
  return out;
}

EigenSystem herm_eig(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  if (es.info() != Eigen::Success) throw NumericalLimitError("Hermitian eigensolver failed");
  const Index d = a.dim();
  EigenSystem out{RealVector(d), ComplexMatrix(d, d)};
  for (Index i = 0; i < d; ++i) {
    out.values(i) = es.eigenvalues()(d - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
  Index start = 0;
  while (start < d) {
    Index stop = start + 1;
    while (stop < d && out.values(start) - out.values(stop) <= tol::kEig * scale) ++stop;
    if (stop - start > 1) {
      out.vectors.middleCols(start, stop - start) =
          canonical_cluster_basis(out.vectors.middleCols(start, stop - start));
    } else {
      phase_fix(out.vectors.col(start));
    }
    start = stop;
  }
  return out;
}

double min_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(a.dim() - 1);
}

namespace {

void require_psd(const EigenSystem& es, const char* what) {
  const double lo = es.values(es.values.size() - 1);
  if (lo < -tol::kPsd * std::max(1.0, es.values.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << what << " needs a positive semidefinite operator, min eigenvalue " << lo;
    throw ValidationError(os.str());
  }
}

}  // namespace

ComplexMatrix support_basis(const HermitianOperator& a, double rank_tol) {
  const EigenSystem es = herm_eig(a);
  require_psd(es, "support_basis");
  Index r = 0;
  while (r < es.values.size() && es.values(r) > rank_tol) ++r;
  return es.vectors.leftCols(r);
}

ComplexMatrix kernel_basis(const HermitianOperator& a, double rank_tol) {
  const EigenSystem es = herm_eig(a);
  require_psd(es, "kernel_basis");
  Index r = 0;
  while (r < es.values.size() && es.values(r) > rank_tol) ++r;
  return es.vectors.rightCols(es.values.size() - r);
}

HermitianOperator support_projector(const HermitianOperator& a, double rank_tol) {
  const ComplexMatrix u = support_basis(a, rank_tol);
  if (u.cols() == 0) return HermitianOperator::zero(a.dim());
  return HermitianOperator::hermitian_part(u * u.adjoint());
}

HermitianOperator kernel_projector(const HermitianOperator& a, double rank_tol) {
  const HermitianOperator p = support_projector(a, rank_tol);
  return HermitianOperator::hermitian_part(ComplexMatrix::Identity(a.dim(), a.dim()) - p.matrix());
}

double trace_norm(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace distance between states of different dimension");
  return 0.5 * trace_norm(HermitianOperator::hermitian_part(a.matrix() - b.matrix()));
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexVector vec_row_major(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

ComplexMatrix unvec_row_major(const ComplexVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec: size mismatch");
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

}  // namespace qfix
