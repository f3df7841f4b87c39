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

#include <cmath>

#include "qfix/linops.hpp"
#include "support.hpp"

using namespace qfix;
using qfix::testing::diff;
using qfix::testing::engine;
using qfix::testing::ket_bra;

namespace {

// Entry-by-entry Kronecker product, written without block arithmetic.
ComplexMatrix kron_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Sum over the minor index: out(i,j) = sum_k m[(i,k),(j,k)].
ComplexMatrix trace_second_oracle(const ComplexMatrix& m, Index d1, Index d2) {
  ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j)
      for (Index k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
  return out;
}

ComplexMatrix trace_first_oracle(const ComplexMatrix& m, Index d1, Index d2) {
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Index i = 0; i < d2; ++i)
    for (Index j = 0; j < d2; ++j)
      for (Index k = 0; k < d1; ++k) out(i, j) += m(k * d2 + i, k * d2 + j);
  return out;
}

ComplexVector bell(int k) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (k) {
    case 0: v(0) = h, v(3) = h; break;
    case 1: v(0) = h, v(3) = -h; break;
    case 2: v(1) = h, v(2) = h; break;
    default: v(1) = h, v(2) = -h; break;
  }
  return v;
}

}  // namespace

TEST_CASE("kron of identities and basis projectors") {
  CHECK(diff(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)), ComplexMatrix::Identity(4, 4)) ==
        0.0);
  const ComplexMatrix k = kron(ket_bra(2, 0, 0), ket_bra(2, 1, 1));
  CHECK(diff(k, ket_bra(4, 1, 1)) == 0.0);
}

TEST_CASE("kron matches the quadruple loop on random and rectangular inputs") {
  auto rng = engine(1);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random::ginibre(rng, 2, 2);
    const ComplexMatrix b = random::ginibre(rng, 2, 2);
    CHECK(diff(kron(a, b), kron_oracle(a, b)) < 1e-15);
  }
  const ComplexMatrix a = random::ginibre(rng, 2, 3);
  const ComplexMatrix b = random::ginibre(rng, 3, 1);
  CHECK(diff(kron(a, b), kron_oracle(a, b)) < 1e-15);
}

TEST_CASE("kron is associative") {
  auto rng = engine(2);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = random::ginibre(rng, 2, 2);
    const ComplexMatrix b = random::ginibre(rng, 3, 2);
    const ComplexMatrix c = random::ginibre(rng, 2, 3);
    CHECK(diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
  }
}

TEST_CASE("partial trace identities") {
  auto rng = engine(3);
  const ComplexMatrix a = random::hermitian(rng, 2).matrix();
  const ComplexMatrix b = random::hermitian(rng, 2).matrix();
  CHECK(diff(partial_trace(kron(a, b), 2, 2, Subsystem::kSecond), a * b.trace()) < 1e-12);
  CHECK(diff(partial_trace(ComplexMatrix::Identity(4, 4), 2, 2, Subsystem::kFirst),
             2.0 * ComplexMatrix::Identity(2, 2)) == 0.0);
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(5, 5), 2, 2, Subsystem::kFirst), DimensionError);
}

TEST_CASE("partial trace matches the index-sum oracle") {
  auto rng = engine(4);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix m = random::hermitian(rng, 4).matrix();
    CHECK(diff(partial_trace(m, 2, 2, Subsystem::kSecond), trace_second_oracle(m, 2, 2)) < 1e-14);
    const ComplexMatrix r = random::ginibre(rng, 6, 6);
    CHECK(diff(partial_trace(r, 2, 3, Subsystem::kSecond), trace_second_oracle(r, 2, 3)) < 1e-14);
    CHECK(diff(partial_trace(r, 2, 3, Subsystem::kFirst), trace_first_oracle(r, 2, 3)) < 1e-14);
    CHECK(std::abs(partial_trace(r, 3, 2, Subsystem::kFirst).trace() - r.trace()) < 1e-13);
  }
}

TEST_CASE("property: partial trace of products for random factors") {
  auto rng = engine(5);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix a = random::ginibre(rng, 3, 3);
    const ComplexMatrix b = random::ginibre(rng, 2, 2);
    CHECK(diff(partial_trace(kron(a, b), 3, 2, Subsystem::kSecond), a * b.trace()) < 1e-4);
    CHECK(diff(partial_trace(kron(a, b), 3, 2, Subsystem::kFirst), b * a.trace()) < 1e-4);
  }
}

TEST_CASE("herm_eig on small fixed inputs") {
  const EigenSystem id = herm_eig(HermitianOperator::identity(2));
  CHECK(id.values(0) == doctest::Approx(1.0));
  CHECK(id.values(1) == doctest::Approx(1.0));
  CHECK(diff(id.vectors.adjoint() * id.vectors, ComplexMatrix::Identity(2, 2)) < 1e-12);

  const EigenSystem d = herm_eig(HermitianOperator(testing::diag({0.3, 0.7})));
  CHECK(d.values(0) == doctest::Approx(0.7));
  CHECK(d.values(1) == doctest::Approx(0.3));
  CHECK(std::abs(d.vectors(1, 0) - Complex(1.0)) < 1e-12);
  CHECK(std::abs(d.vectors(0, 1) - Complex(1.0)) < 1e-12);
}

TEST_CASE("herm_eig breaks degenerate ties deterministically") {
  // Identity: the canonical basis is the standard one, in order.
  const EigenSystem id = herm_eig(HermitianOperator::identity(3));
  CHECK(diff(id.vectors, ComplexMatrix::Identity(3, 3)) < 1e-12);
  // A phase-rotated copy must give the same eigenvectors.
  auto rng = engine(6);
  const ComplexMatrix u = random::haar_unitary(rng, 3);
  const ComplexMatrix a = u * testing::diag({0.5, 0.5, 0.1}) * u.adjoint();
  const EigenSystem e1 = herm_eig(HermitianOperator::hermitian_part(a));
  const EigenSystem e2 = herm_eig(HermitianOperator::hermitian_part(a));
  CHECK(diff(e1.vectors, e2.vectors) == 0.0);
  for (Index k = 0; k < 3; ++k) {
    Index first = 0;
    while (std::abs(e1.vectors(first, k)) < 1e-12) ++first;
    CHECK(std::abs(e1.vectors(first, k).imag()) < 1e-12);
    CHECK(e1.vectors(first, k).real() > 0.0);
  }
}

TEST_CASE("property: herm_eig reconstructs random Hermitian matrices up to dim 16") {
  auto rng = engine(7);
  for (Index d = 1; d <= 16; ++d) {
    const HermitianOperator a = random::hermitian(rng, d);
    const EigenSystem es = herm_eig(a);
    const ComplexMatrix rec = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    CHECK(diff(rec, a.matrix()) <= 1e-10);
    CHECK(diff(es.vectors.adjoint() * es.vectors, ComplexMatrix::Identity(d, d)) <= 1e-8);
    for (Index k = 1; k < d; ++k) CHECK(es.values(k - 1) >= es.values(k));
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator{m}, ValidationError);
  CHECK_THROWS_AS(HermitianOperator{ComplexMatrix::Zero(2, 3)}, ValidationError);
}

TEST_CASE("support and kernel projectors") {
  CHECK(diff(support_projector(HermitianOperator(ket_bra(2, 0, 0))).matrix(), ket_bra(2, 0, 0)) < 1e-12);
  CHECK(diff(support_projector(DensityMatrix::maximally_mixed(2).op()).matrix(), ComplexMatrix::Identity(2, 2)) <
        1e-12);
  const ComplexMatrix plus = testing::plus() * testing::plus().adjoint();
  CHECK(diff(support_projector(HermitianOperator(0.6 * plus)).matrix(), plus) < 1e-12);
  CHECK(diff(kernel_projector(HermitianOperator(ket_bra(2, 0, 0))).matrix(), ket_bra(2, 1, 1)) < 1e-12);
  CHECK(max_abs(kernel_projector(DensityMatrix::maximally_mixed(3).op()).matrix()) < 1e-12);
  CHECK_THROWS_AS(support_projector(HermitianOperator(-1.0 * ket_bra(2, 0, 0))), ValidationError);
}

TEST_CASE("kernel of a generic Bell-basis mixture is the missing Bell vector") {
  // sigma_0 mixes V0 with two independent superpositions of V1 and V2.
  const ComplexVector a = (0.6 * bell(1) + 0.8 * bell(2));
  const ComplexVector b = (0.8 * bell(1) - 0.6 * bell(2));
  const ComplexMatrix s0 = 0.5 * bell(0) * bell(0).adjoint() + 0.3 * a * a.adjoint() + 0.2 * b * b.adjoint();
  const ComplexMatrix k = kernel_projector(HermitianOperator(s0)).matrix();
  CHECK(diff(k, bell(3) * bell(3).adjoint()) < 1e-10);
  CHECK(std::abs((s0 * k).trace()) <= 4 * tol::kRank);
}

TEST_CASE("property: support and kernel projectors complement each other") {
  auto rng = engine(8);
  for (int t = 0; t < 40; ++t) {
    const Index d = 2 + t % 4;
    const DensityMatrix rho = random::density_matrix(rng, d, 1 + t % d);
    const ComplexMatrix p = support_projector(rho.op()).matrix();
    const ComplexMatrix q = kernel_projector(rho.op()).matrix();
    CHECK(diff(p + q, ComplexMatrix::Identity(d, d)) <= 1e-12);
    CHECK(diff(p * p, p) <= 1e-10);
    CHECK(diff(p * rho.matrix(), rho.matrix()) <= 1e-10);
    CHECK(std::abs(p.trace().real() - double(1 + t % d)) < 1e-9);
  }
}

TEST_CASE("trace distance") {
  const DensityMatrix z0 = DensityMatrix::basis(2, 0);
  const DensityMatrix z1 = DensityMatrix::basis(2, 1);
  CHECK(trace_distance(z0, z0) == doctest::Approx(0.0));
  CHECK(trace_distance(z0, z1) == doctest::Approx(1.0));
  CHECK(trace_distance(z0, DensityMatrix::maximally_mixed(2)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(trace_distance(z0, DensityMatrix::basis(3, 0)), DimensionError);
}

TEST_CASE("property: trace distance is a bounded metric") {
  auto rng = engine(9);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + t % 3;
    const auto a = random::density_matrix(rng, d);
    const auto b = random::density_matrix(rng, d);
    const auto c = random::pure_state(rng, d);
    const double ab = trace_distance(a, b), bc = trace_distance(b, c), ac = trace_distance(a, c);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0 + 1e-12);
    CHECK(std::abs(ab - trace_distance(b, a)) < 1e-12);
    CHECK(ac <= ab + bc + 1e-12);
  }
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix{ComplexMatrix(testing::diag({0.5, 0.4}))}, ValidationError);
  CHECK_THROWS_AS(DensityMatrix{ComplexMatrix(testing::diag({1.2, -0.2}))}, ValidationError);
  ComplexVector psi(2);
  psi << 3.0, Complex(0.0, 4.0);
  const DensityMatrix p = DensityMatrix::pure(psi);
  CHECK(p.op().trace() == doctest::Approx(1.0));
  CHECK(std::abs(p.matrix()(0, 1) - Complex(0.0, -0.48)) < 1e-12);
}

TEST_CASE("row-major vectorization round trip") {
  auto rng = engine(10);
  const ComplexMatrix m = random::ginibre(rng, 2, 3);
  const ComplexVector v = vec_row_major(m);
  CHECK(v(1) == m(0, 1));
  CHECK(v(3) == m(1, 0));
  CHECK(diff(unvec_row_major(v, 2, 3), m) == 0.0);
}
