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

#include "qfix/engineer.hpp"
#include "support.hpp"

using namespace qfix;
using namespace qfix::engineer;
using qfix::testing::diff;
using qfix::testing::engine;
using qfix::testing::ket_bra;

namespace {

ComplexVector bell(int k) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  if (k == 0) v(0) = h, v(3) = h;
  if (k == 1) v(0) = h, v(3) = -h;
  if (k == 2) v(1) = h, v(2) = h;
  if (k == 3) v(1) = h, v(2) = -h;
  return v;
}

ComplexMatrix proj(const ComplexVector& v) { return v * v.adjoint(); }

DensityMatrix basis(Index d, Index k) { return DensityMatrix::basis(d, k); }

double fixed_residual(const ChoiMatrix& c, const DensityMatrix& s) { return trace_distance(qfix::apply(c, s), s); }

const ValidityCheck* find(const ValidityLedger& l, const std::string& name) {
  for (const auto& c : l)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("single fixed point: pure sigma with orthogonal B gives dephasing") {
  const auto spec = SingleFixedPointSpec::from_states(basis(2, 0), basis(2, 1));
  CHECK(spec.lambda_max == doctest::Approx(1.0));
  const ChoiMatrix c = build_single_fixed_point(spec);
  const ComplexMatrix expect = kron(ket_bra(2, 0, 0), ket_bra(2, 0, 0)) + kron(ket_bra(2, 1, 1), ket_bra(2, 1, 1));
  CHECK(diff(c.matrix(), expect) < 1e-14);
}

TEST_CASE("single fixed point: maximally mixed sigma uses the first canonical eigenvector") {
  const auto spec = SingleFixedPointSpec::from_states(DensityMatrix::maximally_mixed(2), basis(2, 1));
  CHECK(spec.lambda_max == doctest::Approx(0.5));
  CHECK(std::abs(spec.v_max(0) - Complex(1.0)) < 1e-12);
  const ChoiMatrix c = build_single_fixed_point(spec);
  const ComplexMatrix b = ket_bra(2, 1, 1);
  const ComplexMatrix expect = kron(ComplexMatrix::Identity(2, 2) - b, ket_bra(2, 0, 0)) + kron(b, ket_bra(2, 1, 1));
  CHECK(diff(c.matrix(), expect) < 1e-14);
  CHECK(fixed_residual(c, DensityMatrix::maximally_mixed(2)) < 1e-14);
}

TEST_CASE("single fixed point: boundary case B = sigma is accepted") {
  const auto spec = SingleFixedPointSpec::from_states(basis(2, 0), basis(2, 0));
  const auto ledger = check_single_fixed_point(spec);
  CHECK(all_passed(ledger));
  CHECK(ledger.front().value == doctest::Approx(1.0));
  const ChoiMatrix c = build_single_fixed_point(spec);
  CHECK(fixed_residual(c, basis(2, 0)) < 1e-14);
  CHECK(is_cptp(c).cptp());
}

TEST_CASE("single fixed point: violated inequality is rejected by name") {
  const DensityMatrix sigma(ComplexMatrix(testing::diag({0.6, 0.4})));
  const auto spec = SingleFixedPointSpec::from_states(sigma, basis(2, 0));
  const auto ledger = check_single_fixed_point(spec);
  CHECK_FALSE(ledger[0].passed);
  try {
    build_single_fixed_point(spec);
    FAIL("expected rejection");
  } catch (const InfeasibleError& e) {
    CHECK(e.reason() == "<V_max|B|V_max>");
  }
}

TEST_CASE("single fixed point: the inequality alone does not guarantee complete positivity") {
  // <V|B|V> = 0 <= lambda, yet sigma - (1 - lambda) B has a negative eigenvalue.
  const DensityMatrix sigma(ComplexMatrix(testing::diag({0.4, 0.35, 0.25})));
  const auto spec = SingleFixedPointSpec::from_states(sigma, basis(3, 2));
  const auto ledger = check_single_fixed_point(spec);
  CHECK(ledger[0].passed);
  CHECK_FALSE(ledger[1].passed);
  CHECK_FALSE(is_cptp(assemble_single_fixed_point(spec)).cp);
  CHECK_THROWS_AS(build_single_fixed_point(spec), InfeasibleError);
}

TEST_CASE("property: accepted single-fixed-point builds are CPTP and fix sigma") {
  auto rng = engine(21);
  int built = 0;
  for (int t = 0; t < 2000 && built < 200; ++t) {
    const Index d = 2 + t % 3;
    const DensityMatrix b = random::density_matrix(rng, d);
    const double w = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
    const DensityMatrix other = random::density_matrix(rng, d, 1);
    const DensityMatrix sigma(HermitianOperator::hermitian_part((1 - w) * b.matrix() + w * other.matrix()));
    const auto spec = SingleFixedPointSpec::from_states(sigma, b);
    const auto ledger = check_single_fixed_point(spec);
    const ChoiMatrix c = assemble_single_fixed_point(spec);
    // The fixed-point identity holds regardless of validity.
    CHECK(fixed_residual(c, sigma) < 1e-12);
    CHECK(is_cptp(c).tp);
    CHECK(is_cptp(c).cp == ledger[1].passed);
    if (!all_passed(ledger)) continue;
    ++built;
    CHECK(is_cptp(build_single_fixed_point(spec)).cptp());
  }
  CHECK(built == 200);
}

TEST_CASE("discrimination projectors for orthogonal states") {
  const auto r = find_discrimination_projectors({basis(2, 0), basis(2, 1)});
  REQUIRE(r.feasible);
  CHECK(diff(r.projectors[0].matrix(), ket_bra(2, 0, 0)) < 1e-12);
  CHECK(diff(r.projectors[1].matrix(), ket_bra(2, 1, 1)) < 1e-12);
  CHECK(r.success[0] == doctest::Approx(1.0));
}

TEST_CASE("discrimination of |0> against |+> succeeds with overlap one half") {
  const auto r = find_discrimination_projectors({basis(2, 0), DensityMatrix::pure(testing::plus())});
  REQUIRE(r.feasible);
  CHECK(diff(r.projectors[0].matrix(), proj(testing::minus())) < 1e-12);
  CHECK(diff(r.projectors[1].matrix(), ket_bra(2, 1, 1)) < 1e-12);
  CHECK(r.success[0] == doctest::Approx(0.5));
  CHECK(r.success[1] == doctest::Approx(0.5));
}

TEST_CASE("discrimination fails when one support contains the other") {
  const auto r = find_discrimination_projectors({basis(2, 0), DensityMatrix::maximally_mixed(2)});
  CHECK_FALSE(r.feasible);
  REQUIRE(r.failed_index.has_value());
  CHECK(*r.failed_index == 0);
  CHECK(r.kernel_dims[1] == 0);
  CHECK_FALSE(r.reason.empty());
}

TEST_CASE("discrimination removes the common kernel") {
  const DensityMatrix s1(ComplexMatrix(testing::diag({0.5, 0.5, 0.0})));
  const auto r = find_discrimination_projectors({basis(3, 0), s1});
  CHECK_FALSE(r.feasible);
  CHECK(*r.failed_index == 0);
  CHECK(r.ranks[0] == 0);
  CHECK(r.ranks[1] == 1);
}

TEST_CASE("discrimination of Bell-basis states") {
  SUBCASE("pure orthogonal Bell states") {
    const auto r = find_discrimination_projectors({DensityMatrix::pure(bell(0)), DensityMatrix::pure(bell(1))});
    REQUIRE(r.feasible);
    CHECK(diff(r.projectors[0].matrix(), proj(bell(0))) < 1e-10);
    CHECK(diff(r.projectors[1].matrix(), proj(bell(1))) < 1e-10);
  }
  SUBCASE("generic mixtures: the second state has no private support") {
    const DensityMatrix s0(ComplexMatrix((proj(bell(0)) + proj(bell(1)) + proj(bell(2))) / 3.0));
    const DensityMatrix s1(ComplexMatrix((2.0 * proj(bell(1)) + proj(bell(2))) / 3.0));
    const auto r = find_discrimination_projectors({s0, s1});
    CHECK_FALSE(r.feasible);
    CHECK(*r.failed_index == 1);
    CHECK(std::abs(r.success[1]) < 1e-10);
    CHECK(diff(r.projectors[0].matrix(), proj(bell(0))) < 1e-10);
    CHECK(std::abs((s1.matrix() * proj(bell(3))).trace()) < 1e-12);
  }
}

TEST_CASE("separable construction on the qutrit example is the diagonal map") {
  SeparableMultiSpec spec{{basis(3, 0), basis(3, 1)},
                          {HermitianOperator(ket_bra(3, 0, 0)), HermitianOperator(ket_bra(3, 1, 1))},
                          basis(3, 2)};
  const auto ledger = check_separable_multi(spec);
  CHECK(all_passed(ledger));
  const ChoiMatrix c = build_separable_multi(spec);
  ComplexMatrix expect = ComplexMatrix::Zero(9, 9);
  for (Index i = 0; i < 3; ++i) expect += kron(ket_bra(3, i, i), ket_bra(3, i, i));
  CHECK(diff(c.matrix(), expect) < 1e-14);
  CHECK(fixed_residual(c, basis(3, 0)) < 1e-14);
  CHECK(fixed_residual(c, basis(3, 1)) < 1e-14);
  CHECK(spec.convergence_margin() == doctest::Approx(1.0));
}

TEST_CASE("separable construction with a vanishing residual ignores B") {
  SeparableMultiSpec spec{{basis(2, 0), basis(2, 1)},
                          {HermitianOperator(ket_bra(2, 0, 0)), HermitianOperator(ket_bra(2, 1, 1))},
                          basis(2, 0)};
  const auto ledger = check_separable_multi(spec);
  const auto* b = find(ledger, "sum_i tr[B Pi_i] / tr[Pi_i sigma_i]");
  REQUIRE(b != nullptr);
  CHECK(b->skipped);
  CHECK(b->passed);
  const ChoiMatrix c = build_separable_multi(spec);
  const ComplexMatrix expect = kron(ket_bra(2, 0, 0), ket_bra(2, 0, 0)) + kron(ket_bra(2, 1, 1), ket_bra(2, 1, 1));
  CHECK(diff(c.matrix(), expect) < 1e-14);
  CHECK(max_abs(residual_operator(spec)) < 1e-14);
}

TEST_CASE("separable construction with one pure state reduces to the single-fixed-point form") {
  auto rng = engine(22);
  const DensityMatrix sigma = random::pure_state(rng, 3);
  const DensityMatrix b = random::density_matrix(rng, 3);
  SeparableMultiSpec spec{{sigma}, {support_projector(sigma.op())}, b};
  const ChoiMatrix multi = assemble_separable_multi(spec);
  const ChoiMatrix single = assemble_single_fixed_point(SingleFixedPointSpec::from_states(sigma, b));
  CHECK(diff(multi.matrix(), single.matrix()) < 1e-10);
}

TEST_CASE("separable construction names the failed condition") {
  SUBCASE("orthogonality") {
    SeparableMultiSpec spec{{basis(2, 0), DensityMatrix::pure(testing::plus())},
                            {HermitianOperator(ket_bra(2, 0, 0)), HermitianOperator(ket_bra(2, 1, 1))},
                            DensityMatrix::maximally_mixed(2)};
    try {
      build_separable_multi(spec);
      FAIL("expected rejection");
    } catch (const InfeasibleError& e) {
      CHECK(e.reason() == "tr[sigma_1 Pi_0]");
    }
  }
  SUBCASE("success probability") {
    SeparableMultiSpec spec{{basis(3, 0), basis(3, 1)},
                            {HermitianOperator(ket_bra(3, 0, 0)), HermitianOperator(ket_bra(3, 2, 2))},
                            basis(3, 2)};
    try {
      build_separable_multi(spec);
      FAIL("expected rejection");
    } catch (const InfeasibleError& e) {
      CHECK(e.reason() == "tr[Pi_1 sigma_1]");
    }
  }
  SUBCASE("decay state") {
    SeparableMultiSpec spec{{basis(3, 0), basis(3, 1)},
                            {HermitianOperator(ket_bra(3, 0, 0)), HermitianOperator(ket_bra(3, 1, 1))},
                            basis(3, 0)};
    CHECK(spec.convergence_margin() == doctest::Approx(0.0));
    try {
      build_separable_multi(spec);
      FAIL("expected rejection");
    } catch (const InfeasibleError& e) {
      CHECK(e.reason() == "sum_i tr[B Pi_i] / tr[Pi_i sigma_i]");
    }
  }
}

TEST_CASE("property: the separable fixed-point identity holds for valid specs") {
  auto rng = engine(23);
  for (int t = 0; t < 50; ++t) {
    // Random states on disjoint blocks of a random basis in dimension 5.
    const ComplexMatrix u = random::haar_unitary(rng, 5);
    const ComplexMatrix a = random::density_matrix(rng, 2).matrix();
    const ComplexMatrix b = random::density_matrix(rng, 2).matrix();
    ComplexMatrix s0 = ComplexMatrix::Zero(5, 5), s1 = ComplexMatrix::Zero(5, 5);
    s0.block(0, 0, 2, 2) = a;
    s1.block(2, 2, 2, 2) = b;
    const DensityMatrix sigma0(HermitianOperator::hermitian_part(u * s0 * u.adjoint()));
    const DensityMatrix sigma1(HermitianOperator::hermitian_part(u * s1 * u.adjoint()));
    const auto disc = find_discrimination_projectors({sigma0, sigma1});
    REQUIRE(disc.feasible);
    SeparableMultiSpec spec{{sigma0, sigma1}, disc.projectors, DensityMatrix::pure(u.col(4))};
    const ChoiMatrix c = build_separable_multi(spec);
    CHECK(max_abs(qfix::apply(c, sigma0).matrix() - sigma0.matrix()) <= 1e-9);
    CHECK(max_abs(qfix::apply(c, sigma1).matrix() - sigma1.matrix()) <= 1e-9);
    CHECK(is_cptp(c).cptp());
  }
}

TEST_CASE("perturbing a projector off the kernel breaks the fixed point linearly") {
  const DensityMatrix b = basis(3, 2);
  const double factor = 0.5 * trace_norm(HermitianOperator(ket_bra(3, 1, 1) - ket_bra(3, 2, 2)));
  for (double eps : {1e-4, 1e-3, 1e-2}) {
    SeparableMultiSpec spec{{basis(3, 0), basis(3, 1)},
                            {HermitianOperator(ket_bra(3, 0, 0)),
                             HermitianOperator(ket_bra(3, 1, 1) + eps * ket_bra(3, 0, 0))},
                            b};
    // The perturbed map is not CP, so measure the residual on the linear extension.
    const ChoiMatrix c = assemble_separable_multi(spec);
    const ComplexMatrix delta = qfix::apply(c, basis(3, 0).matrix()) - basis(3, 0).matrix();
    CHECK(0.5 * trace_norm(HermitianOperator(delta)) == doctest::Approx(eps * factor).epsilon(1e-9));
    CHECK_THROWS_AS(build_separable_multi(spec), InfeasibleError);
  }
}

TEST_CASE("SDP construction for orthogonal pure states") {
  const SdpChannel ch = build_via_sdp({basis(2, 0), basis(2, 1)}, DensityMatrix::maximally_mixed(2));
  const ComplexMatrix expect = kron(ket_bra(2, 0, 0), ket_bra(2, 0, 0)) + kron(ket_bra(2, 1, 1), ket_bra(2, 1, 1));
  CHECK(ch.x.op().trace() == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(diff(ch.x.matrix(), expect) < 1e-6);
  CHECK(ch.residual_norm < 1e-6);
  CHECK(is_cptp(ch.c).cptp());
  CHECK(fixed_residual(ch.c, basis(2, 0)) < 1e-8);
  CHECK(fixed_residual(ch.c, basis(2, 1)) < 1e-8);
}

TEST_CASE("SDP construction for one pure state recovers the single-fixed-point first term") {
  const SdpChannel ch = build_via_sdp({basis(2, 0)}, basis(2, 1));
  CHECK(ch.x.op().trace() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(diff(ch.x.matrix(), kron(ket_bra(2, 0, 0), ket_bra(2, 0, 0))) < 1e-6);
  CHECK(ch.contraction == doctest::Approx(0.0).epsilon(1e-6));
  CHECK_FALSE(ch.contraction_warning);
  const SdpChannel dup = build_via_sdp({basis(2, 0), basis(2, 0)}, basis(2, 1));
  CHECK(diff(dup.x.matrix(), ch.x.matrix()) < 1e-6);
}

TEST_CASE("SDP channel iterates monotonically toward its fixed point") {
  auto rng = engine(24);
  const DensityMatrix sigma = random::density_matrix(rng, 2);
  const SdpChannel ch = build_via_sdp({sigma}, DensityMatrix::maximally_mixed(2));
  CHECK(is_cptp(ch.c).cptp());
  CHECK(fixed_residual(ch.c, sigma) < 1e-7);
  const auto seq = iterate(ch.c, random::density_matrix(rng, 2), 30);
  double prev = 2.0;
  for (const auto& r : seq) {
    const double d = trace_distance(r, sigma);
    CHECK(d <= prev + 1e-9);
    prev = d;
  }
}

TEST_CASE("SDP completion is trace preserving for random inputs") {
  auto rng = engine(25);
  for (int t = 0; t < 5; ++t) {
    const Index d = 2 + t % 2;
    const SdpChannel ch = build_via_sdp({random::density_matrix(rng, d)}, random::density_matrix(rng, d));
    CHECK(diff(partial_trace(ch.c.matrix(), d, d, Subsystem::kFirst), ComplexMatrix::Identity(d, d)) <= 1e-9);
  }
}

TEST_CASE("SDP construction rejects mixed dimensions") {
  CHECK_THROWS_AS(build_via_sdp({basis(2, 0), basis(3, 0)}, basis(2, 1)), DimensionError);
}

TEST_CASE("SDP completion is re-solved when the minimum-trace X overshoots the identity") {
  // sigma0 = (V0 + V1 + V2)/3 and sigma1 = (2 V1 + V2)/3 in the Bell basis.
  const DensityMatrix s0(ComplexMatrix((proj(bell(0)) + proj(bell(1)) + proj(bell(2))) / 3.0));
  const DensityMatrix s1(ComplexMatrix((2.0 * proj(bell(1)) + proj(bell(2))) / 3.0));
  const SdpChannel ch = build_via_sdp({s0, s1}, DensityMatrix::maximally_mixed(4));
  CHECK(ch.completion_constrained);
  CHECK(ch.literal_min_eig < -1e-3);
  CHECK(is_cptp(ch.c).cptp());
  CHECK(fixed_residual(ch.c, s0) < 1e-7);
  CHECK(fixed_residual(ch.c, s1) < 1e-7);
  CHECK(max_eigenvalue(HermitianOperator::hermitian_part(partial_trace(ch.x.matrix(), 4, 4, Subsystem::kFirst))) <=
        1.0 + 1e-7);
}

TEST_CASE("property: SDP channels for random state pairs are CPTP and fix both states") {
  auto rng = engine(26);
  for (int t = 0; t < 12; ++t) {
    const Index d = 2 + t % 2;
    // Share an eigenbasis so that the pair admits non-trivial channels.
    const ComplexMatrix u = random::haar_unitary(rng, d);
    std::vector<DensityMatrix> sigmas;
    for (int k = 0; k < 2; ++k) {
      RealVector p = RealVector::Zero(d);
      std::uniform_real_distribution<double> w(0.0, 1.0);
      for (Index i = 0; i < d; ++i) p(i) = (t % 3 == 0 && i == k) ? 0.0 : w(rng);
      p /= p.sum();
      sigmas.emplace_back(HermitianOperator::hermitian_part(u * p.cast<Complex>().asDiagonal() * u.adjoint()));
    }
    const SdpChannel ch = build_via_sdp(sigmas, random::density_matrix(rng, d));
    CHECK(is_cptp(ch.c).cptp());
    for (const auto& s : sigmas) CHECK(fixed_residual(ch.c, s) < 1e-7);
    CHECK(ch.completion_constrained == (ch.literal_min_eig < -1e-9));
  }
}
