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

#include "qfix/quasireal.hpp"

#include <set>

#include "qfix/nnls.hpp"

namespace qfix::quasireal {

void QuasiRealization::validate() const {
  if (dim < 1) throw ValidationError("quasi-realization dimension must be positive");
  if (alphabet.empty()) throw ValidationError("quasi-realization alphabet is empty");
  if (std::set<std::string>(alphabet.begin(), alphabet.end()).size() != alphabet.size())
    throw ValidationError("quasi-realization alphabet has repeated symbols");
  if (d_maps.size() != alphabet.size()) throw ValidationError("need exactly one map per alphabet symbol");
  for (const auto& d : d_maps)
    if (d.rows() != dim || d.cols() != dim) throw DimensionError("symbol map is not dim x dim");
  if (pi.size() != dim || tau.size() != dim) throw DimensionError("pi and tau must have length dim");
  auto finite = [](const auto& m) { return m.allFinite(); };
  if (!finite(pi) || !finite(tau)) throw ValidationError("pi and tau must be finite");
  for (const auto& d : d_maps)
    if (!finite(d)) throw ValidationError("symbol maps must be finite");
}

std::size_t QuasiRealization::symbol_index(const std::string& symbol) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == symbol) return i;
  throw ValidationError("unknown symbol '" + symbol + "'");
}

double word_probability(const QuasiRealization& q, const Word& word) {
  q.validate();
  RealVector row = q.pi;
  for (const auto& s : word) row = q.d_maps[q.symbol_index(s)].transpose() * row;
  return row.dot(q.tau);
}

double WordDistribution::total() const {
  double s = 0.0;
  for (double p : probabilities) s += p;
  return s;
}

WordDistribution word_distribution(const QuasiRealization& q, int length, Execution exec) {
  q.validate();
  if (length < 0) throw ValidationError("word length must be non-negative");
  const std::size_t k = q.alphabet.size();
  std::size_t count = 1;
  for (int i = 0; i < length; ++i) {
    count *= k;
    if (count > kMaxWords)
      throw ValidationError("word enumeration exceeds " + std::to_string(kMaxWords) + " words");
  }
  WordDistribution out;
  out.length = length;
  out.probabilities = kernels::word_probabilities(q.d_maps, q.pi, q.tau, length, exec);
  out.words.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    Word w(static_cast<std::size_t>(length));
    std::size_t r = n;
    for (int pos = length - 1; pos >= 0; --pos) {
      w[std::size_t(pos)] = q.alphabet[r % k];
      r /= k;
    }
    out.words.push_back(std::move(w));
  }
  return out;
}

RealMatrix cause_matrix(const QuasiRealization& q) {
  q.validate();
  RealMatrix c = RealMatrix::Zero(q.dim, q.dim);
  for (const auto& d : q.d_maps) c += d;
  return c;
}

PositivityReport is_positive_realization(const QuasiRealization& q, double tol) {
  const RealMatrix m = cause_matrix(q);
  PositivityReport r;
  r.nonneg = true;
  for (const auto& d : q.d_maps) r.nonneg = r.nonneg && d.minCoeff() >= -tol;
  r.stochastic = (m.rowwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
  r.stationary = (m.transpose() * q.pi - q.pi).cwiseAbs().maxCoeff() <= tol;
  r.tau_ones = (q.tau.array() - 1.0).abs().maxCoeff() <= tol;
  return r;
}

PolyhedralCone PolyhedralCone::orthant(Index dim) {
  if (dim < 1) throw ValidationError("orthant dimension must be positive");
  PolyhedralCone c;
  for (Index i = 0; i < dim; ++i) c.generators.push_back(RealVector::Unit(dim, i));
  return c;
}

Index PolyhedralCone::dim() const { return generators.empty() ? 0 : generators.front().size(); }

void PolyhedralCone::validate() const {
  if (generators.empty()) throw ValidationError("cone has no generators");
  for (const auto& g : generators) {
    if (g.size() != dim()) throw DimensionError("cone generators differ in dimension");
    if (!g.allFinite()) throw ValidationError("cone generator is not finite");
    if (g.norm() == 0.0) throw ValidationError("cone generator is zero");
  }
}

ConeMembership cone_membership(const PolyhedralCone& cone, const RealVector& v, double tol) {
  cone.validate();
  if (v.size() != cone.dim()) throw DimensionError("vector and cone differ in dimension");
  RealMatrix g(cone.dim(), Index(cone.generators.size()));
  for (std::size_t i = 0; i < cone.generators.size(); ++i) g.col(Index(i)) = cone.generators[i];
  const NnlsResult r = nnls(g, v);
  return {r.residual <= tol * (1.0 + v.norm()), r.x, r.residual};
}

bool is_pointed(const PolyhedralCone& cone, double tol) {
  cone.validate();
  for (const auto& g : cone.generators)
    if (cone_membership(cone, -g, tol).member) return false;
  return true;
}

DharmadhikariReport check_dharmadhikari(const QuasiRealization& q, const PolyhedralCone& cone, double tol) {
  q.validate();
  cone.validate();
  if (cone.dim() != q.dim) throw DimensionError("cone dimension differs from realization dimension");
  DharmadhikariReport r;
  r.tau_in_cone = cone_membership(cone, q.tau, tol).member;
  r.maps_preserve_cone = true;
  for (std::size_t u = 0; u < q.d_maps.size() && r.maps_preserve_cone; ++u)
    for (std::size_t i = 0; i < cone.generators.size(); ++i)
      if (!cone_membership(cone, q.d_maps[u] * cone.generators[i], tol).member) {
        r.maps_preserve_cone = false;
        r.detail = "D(" + q.alphabet[u] + ") maps generator " + std::to_string(i) + " outside the cone";
        break;
      }
  r.pi_in_dual = true;
  for (const auto& g : cone.generators) r.pi_in_dual = r.pi_in_dual && q.pi.dot(g) >= -tol;
  r.pointed = is_pointed(cone, tol);
  return r;
}

QuasiRealization change_basis(const QuasiRealization& q, const RealMatrix& t) {
  q.validate();
  if (t.rows() != q.dim || t.cols() != q.dim) throw DimensionError("basis change must be dim x dim");
  const Eigen::FullPivLU<RealMatrix> lu(t);
  if (!lu.isInvertible()) throw ValidationError("basis change is singular");
  const RealMatrix tinv = lu.inverse();
  QuasiRealization out = q;
  for (auto& d : out.d_maps) d = tinv * d * t;
  out.tau = tinv * q.tau;
  out.pi = t.transpose() * q.pi;
  return out;
}

}  // namespace qfix::quasireal
