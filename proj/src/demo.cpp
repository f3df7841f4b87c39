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

#include "qfix/demo.hpp"

#include <cmath>

namespace qfix::demo {

ComplexVector bell_vector(int k) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (k) {
    case 0: v(0) = h, v(3) = h; break;
    case 1: v(0) = h, v(3) = -h; break;
    case 2: v(1) = h, v(2) = h; break;
    case 3: v(1) = h, v(2) = -h; break;
    default: throw ValidationError("Bell index must be 0..3");
  }
  return v;
}

namespace {

void check_weights(const std::array<double, 3>& w, const char* name) {
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) throw ValidationError(std::string(name) + " weights must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError(std::string(name) + " weights must sum to 1");
}

ComplexVector superposition(Complex a, Complex b, const char* name) {
  ComplexVector v = a * bell_vector(1) + b * bell_vector(2);
  const double n = v.norm();
  if (!(n > 1e-12)) throw ValidationError(std::string("superposition ") + name + " vanishes");
  return v / n;
}

DensityMatrix mixture(const ComplexVector& first, const ComplexVector& a, const ComplexVector& b,
                      const std::array<double, 3>& w) {
  const ComplexMatrix m =
      w[0] * first * first.adjoint() + w[1] * a * a.adjoint() + w[2] * b * b.adjoint();
  return DensityMatrix(HermitianOperator::hermitian_part(m));
}

}  // namespace

BellReport run_bell_demo(const BellInput& in) {
  check_weights(in.s, "s");
  check_weights(in.r, "r");
  const BellCoefficients& c = in.coeffs;
  BellReport out;
  out.sigma0 = mixture(bell_vector(0), superposition(c.alpha0, c.beta0, "V1^0"),
                       superposition(c.delta0, c.eps0, "V2^0"), in.s);
  out.sigma1 = mixture(bell_vector(1), superposition(c.alpha1, c.beta1, "V1^1"),
                       superposition(c.delta1, c.eps1, "V2^1"), in.r);
  if (in.b) {
    if (in.b->dim() != 4) throw DimensionError("decay state must be two-qubit");
    out.b = *in.b;
  }
  const std::vector<DensityMatrix> sigmas{out.sigma0, out.sigma1};

  out.discrimination = engineer::find_discrimination_projectors(sigmas);
  const engineer::SeparableMultiSpec spec{sigmas, out.discrimination.projectors, out.b};
  out.ledger = engineer::check_separable_multi(spec);

  if (engineer::all_passed(out.ledger)) {
    out.path = "separable";
    out.channel = engineer::build_separable_multi(spec);
  } else {
    out.path = "sdp";
    for (const auto& chk : out.ledger)
      if (chk.blocking && !chk.passed) {
        out.fallback_reason = chk.name + " " + chk.relation + " " + std::to_string(chk.threshold) + " fails";
        break;
      }
    out.sdp = engineer::build_via_sdp(sigmas, out.b, in.sdp);
    out.channel = out.sdp->c;
  }
  out.cptp = is_cptp(*out.channel);
  for (std::size_t i = 0; i < 2; ++i) {
    const ComplexMatrix image = qfix::apply(*out.channel, sigmas[i].matrix());
    out.fixed_point_residuals[i] = 0.5 * trace_norm(HermitianOperator::hermitian_part(image - sigmas[i].matrix()));
  }
  return out;
}

}  // namespace qfix::demo
