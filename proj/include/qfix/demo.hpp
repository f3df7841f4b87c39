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

// Two-qubit Bell-basis demonstration of the multi-fixed-point constructions.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qfix/engineer.hpp"

namespace qfix::demo {

/// |V0> = (|00>+|11>)/sqrt2, |V1> = (|00>-|11>)/sqrt2,
/// |V2> = (|01>+|10>)/sqrt2, |V3> = (|01>-|10>)/sqrt2.
ComplexVector bell_vector(int k);

/// Superpositions of |V1> and |V2> used inside the two mixtures:
/// first state: alpha0 V1 + beta0 V2 and delta0 V1 + eps0 V2; second state
/// likewise with index 1. Each vector is normalized before use.
struct BellCoefficients {
  Complex alpha0{1.0}, beta0{0.0}, delta0{0.0}, eps0{1.0};
  Complex alpha1{1.0}, beta1{0.0}, delta1{0.0}, eps1{1.0};
};

struct BellInput {
  BellCoefficients coeffs;
  /// sigma0 = s0 V0 + s1 (first superposition) + s2 (second superposition).
  std::array<double, 3> s{1.0 / 3, 1.0 / 3, 1.0 / 3};
  /// sigma1 = r0 V1 + r1 (first superposition) + r2 (second superposition).
  std::array<double, 3> r{1.0 / 3, 1.0 / 3, 1.0 / 3};
  /// Decay state; maximally mixed when absent.
  std::optional<DensityMatrix> b;
  sdp::SdpOptions sdp;
};

struct BellReport {
  DensityMatrix sigma0 = DensityMatrix::maximally_mixed(4);
  DensityMatrix sigma1 = DensityMatrix::maximally_mixed(4);
  DensityMatrix b = DensityMatrix::maximally_mixed(4);
  engineer::DiscriminationResult discrimination;
  /// Every discrimination condition evaluated on the candidate projectors.
  engineer::ValidityLedger ledger;
  /// "separable" when the discrimination construction applies, else "sdp".
  std::string path;
  std::string fallback_reason;
  std::optional<ChoiMatrix> channel;
  std::optional<engineer::SdpChannel> sdp;
  CptpReport cptp;
  /// Trace distance between C(sigma_i) and sigma_i.
  std::array<double, 2> fixed_point_residuals{};
};

/// Throws ValidationError when a weight vector is not a probability vector
/// or a superposition vanishes; InfeasibleError when the separable
/// construction is rejected after discrimination succeeded.
BellReport run_bell_demo(const BellInput& in);

}  // namespace qfix::demo
