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

#include "qfix/demo.hpp"
#include "support.hpp"

using namespace qfix;
using namespace qfix::demo;
using qfix::testing::diff;

namespace {

const engineer::ValidityCheck& entry(const engineer::ValidityLedger& l, const std::string& name) {
  for (const auto& c : l)
    if (c.name == name) return c;
  FAIL("missing ledger entry " << name);
  return l.front();
}

}  // namespace

TEST_CASE("Bell vectors form an orthonormal basis") {
  ComplexMatrix v(4, 4);
  for (int k = 0; k < 4; ++k) v.col(k) = bell_vector(k);
  CHECK(diff(v.adjoint() * v, ComplexMatrix::Identity(4, 4)) < 1e-15);
}

TEST_CASE("default coefficients: the second state cannot be discriminated") {
  const BellReport r = run_bell_demo({});
  CHECK_FALSE(r.discrimination.feasible);
  REQUIRE(r.discrimination.failed_index.has_value());
  CHECK(*r.discrimination.failed_index == 1);
  CHECK(std::abs(entry(r.ledger, "tr[Pi_1 sigma_1]").value) <= 1e-10);
  CHECK(entry(r.ledger, "tr[Pi_0 sigma_0]").value == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(entry(r.ledger, "tr[sigma_0 Pi_1]").value) <= 1e-10);
  CHECK(std::abs(entry(r.ledger, "tr[sigma_1 Pi_0]").value) <= 1e-10);
  // Kernel of sigma0 is the missing Bell vector.
  const ComplexVector v3 = bell_vector(3);
  CHECK(diff(kernel_projector(r.sigma0.op()).matrix(), v3 * v3.adjoint()) < 1e-10);
  CHECK(r.path == "sdp");
  REQUIRE(r.sdp.has_value());
  CHECK(r.cptp.cptp());
  CHECK(r.fixed_point_residuals[0] <= 1e-7);
  CHECK(r.fixed_point_residuals[1] <= 1e-7);
}

TEST_CASE("pure orthogonal Bell states use the discrimination construction") {
  BellInput in;
  in.s = {1, 0, 0};
  in.r = {1, 0, 0};
  const BellReport r = run_bell_demo(in);
  CHECK(r.discrimination.feasible);
  CHECK(r.path == "separable");
  CHECK(r.cptp.cptp());
  CHECK(r.fixed_point_residuals[0] <= 1e-12);
  CHECK(r.fixed_point_residuals[1] <= 1e-12);
}

TEST_CASE("coefficients are normalized before use") {
  BellInput in;
  in.coeffs.alpha0 = 3.0;
  in.coeffs.beta0 = 4.0;
  in.s = {0, 1, 0};
  const BellReport r = run_bell_demo(in);
  const ComplexVector v = (0.6 * bell_vector(1) + 0.8 * bell_vector(2));
  CHECK(diff(r.sigma0.matrix(), v * v.adjoint()) < 1e-14);
}

TEST_CASE("invalid weights and vanishing superpositions are rejected") {
  BellInput in;
  in.s = {0, 0, 0};
  CHECK_THROWS_AS(run_bell_demo(in), ValidationError);
  in.s = {0.5, 0.7, -0.2};
  CHECK_THROWS_AS(run_bell_demo(in), ValidationError);
  in = BellInput{};
  in.coeffs.delta1 = 0.0;
  in.coeffs.eps1 = 0.0;
  CHECK_THROWS_AS(run_bell_demo(in), ValidationError);
}
