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

// Dense complex linear algebra used by every other module.
//
// Bipartite convention: an operator on H1 (x) H2 is indexed by the composite
// index i1 * d2 + i2, i.e. H2 is the minor (fastest-varying) factor. For Choi
// matrices H1 is the channel output and H2 the input.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qfix/errors.hpp"

namespace qfix {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
inline constexpr double kHerm = 1e-9;
inline constexpr double kPsd = 1e-9;
inline constexpr double kEig = 1e-8;
inline constexpr double kRank = 1e-7;
}  // namespace tol

/// Square complex matrix equal to its adjoint within a tolerance. The stored
/// matrix is exactly Hermitian (the antihermitian residue is dropped).
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& m, double herm_tol = tol::kHerm);

  static HermitianOperator zero(Index dim);
  static HermitianOperator identity(Index dim);
  /// Takes the Hermitian part (M + M^dagger) / 2 without any check.
  static HermitianOperator hermitian_part(const ComplexMatrix& m);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

 private:
  struct Unchecked {};
  HermitianOperator(Unchecked, ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Unit-trace positive semidefinite operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op, double psd_tol = tol::kPsd);
  explicit DensityMatrix(const ComplexMatrix& m, double psd_tol = tol::kPsd)
      : DensityMatrix(HermitianOperator(m), psd_tol) {}

  static DensityMatrix maximally_mixed(Index dim);
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix basis(Index dim, Index k);

  Index dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
struct EigenSystem {
  RealVector values;
  ComplexMatrix vectors;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { kFirst = 1, kSecond = 2 };

/// Traces out `over` from an operator on H1 (x) H2 with dims (d1, d2).
ComplexMatrix partial_trace(const ComplexMatrix& m, Index d1, Index d2, Subsystem over);

/// Hermitian eigendecomposition with a deterministic basis inside degenerate
/// eigenspaces: the k-th vector of a cluster is the normalized projection of
/// the first standard basis vector not yet covered, Gram-Schmidt against the
/// previous ones, and every vector has its first nonzero entry real positive.
EigenSystem herm_eig(const HermitianOperator& a);

double min_eigenvalue(const HermitianOperator& a);
double max_eigenvalue(const HermitianOperator& a);

/// Projector onto the span of eigenvectors with eigenvalue > rank_tol.
HermitianOperator support_projector(const HermitianOperator& a, double rank_tol = tol::kRank);
/// I - support_projector(a).
HermitianOperator kernel_projector(const HermitianOperator& a, double rank_tol = tol::kRank);

/// Orthonormal basis of the support (columns), same ordering as herm_eig.
ComplexMatrix support_basis(const HermitianOperator& a, double rank_tol = tol::kRank);
ComplexMatrix kernel_basis(const HermitianOperator& a, double rank_tol = tol::kRank);

/// Half the trace norm of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
/// Trace norm of a Hermitian operator.
double trace_norm(const HermitianOperator& a);

double max_abs(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

/// Row-major flatten, vec(rho)[i * cols + j] = rho(i, j).
ComplexVector vec_row_major(const ComplexMatrix& m);
ComplexMatrix unvec_row_major(const ComplexVector& v, Index rows, Index cols);

}  // namespace qfix
