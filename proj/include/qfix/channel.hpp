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

// Channels in Choi form.
//
// For a linear map Phi on d_in x d_in operators the Choi matrix lives on
// H_out (x) H_in and is
//
//   C = sum_ij Phi(|i><j|) (x) |i><j|,
//
// so that Phi(rho) = tr_in[C (1 (x) rho^T)]. Complete positivity is C >= 0,
// trace preservation is tr_out[C] = 1.

#include <optional>
#include <vector>

#include "qfix/linops.hpp"

namespace qfix {

namespace tol {
inline constexpr double kTp = 1e-9;
inline constexpr double kFixedPoint = 1e-8;
inline constexpr double kConverge = 1e-10;
}  // namespace tol

class ChoiMatrix {
 public:
  ChoiMatrix(Index d_in, Index d_out, HermitianOperator m);

  static ChoiMatrix identity(Index dim);
  static ChoiMatrix from_kraus(const std::vector<ComplexMatrix>& kraus);
  /// Builds the Choi matrix of an arbitrary Hermiticity-preserving map given
  /// as a d_out^2 x d_in^2 superoperator acting on row-major vecs.
  static ChoiMatrix from_superoperator(const ComplexMatrix& s, Index d_in, Index d_out);
  static ChoiMatrix depolarizing(Index dim, double strength);

  Index d_in() const { return d_in_; }
  Index d_out() const { return d_out_; }
  const HermitianOperator& op() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }

 private:
  Index d_in_;
  Index d_out_;
  HermitianOperator m_;
};

struct CptpReport {
  bool cp = false;
  bool tp = false;
  double min_eig = 0.0;
  double tp_residual = 0.0;
  bool cptp() const { return cp && tp; }
};

/// Linear action on an arbitrary d_in x d_in operator.
ComplexMatrix apply(const ChoiMatrix& c, const ComplexMatrix& x);
/// Action on a state; throws ValidationError if the output is not a state
/// within tolerance (only possible for non-CPTP input).
DensityMatrix apply(const ChoiMatrix& c, const DensityMatrix& rho);

CptpReport is_cptp(const ChoiMatrix& c, double psd_tol = tol::kPsd, double tp_tol = tol::kTp);

/// S with S * vec(rho) = vec(Phi(rho)), vec row-major.
ComplexMatrix superoperator(const ChoiMatrix& c);

struct FixedPointSet {
  std::vector<DensityMatrix> states;
  /// trace_distance(Phi(rho), rho) for each state.
  std::vector<double> eigenvalue_residuals;
  /// Superoperator eigenvalues with modulus within fp_tol of 1.
  std::vector<Complex> peripheral_spectrum;
  /// Complex dimension of ker(S - 1).
  Index fixed_space_dim = 0;
};

/// Fixed states of a CPTP map. The returned states are extreme points of the
/// convex set of fixed states and together span the whole fixed space.
FixedPointSet fixed_points(const ChoiMatrix& c, double fp_tol = tol::kFixedPoint);

/// rho_1 .. rho_n with rho_k = Phi(rho_{k-1}).
std::vector<DensityMatrix> iterate(const ChoiMatrix& c, const DensityMatrix& rho0, int n);

struct SettleResult {
  DensityMatrix state;
  int steps = 0;
  bool converged = false;
};

/// Applies c until trace_distance(rho_k, rho_{k+1}) <= converge_tol or
/// max_steps applications have been made.
SettleResult settle(const ChoiMatrix& c, const DensityMatrix& rho0, int max_steps,
                    double converge_tol = tol::kConverge);

}  // namespace qfix
