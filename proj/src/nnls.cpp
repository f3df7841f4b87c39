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

#include "qfix/nnls.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace qfix {

namespace {

// Unconstrained least squares restricted to the passive columns.
RealVector passive_solve(const RealMatrix& a, const RealVector& b, const std::vector<bool>& passive) {
  std::vector<Index> cols;
  for (Index j = 0; j < a.cols(); ++j)
    if (passive[std::size_t(j)]) cols.push_back(j);
  RealMatrix sub(a.rows(), Index(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(Index(k)) = a.col(cols[k]);
  const RealVector zs = sub.colPivHouseholderQr().solve(b);
  RealVector z = RealVector::Zero(a.cols());
  for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(Index(k));
  return z;
}

}  // namespace

NnlsResult nnls(const RealMatrix& a, const RealVector& b, int max_iter) {
  if (a.rows() != b.size()) throw DimensionError("nnls: row count of A differs from length of b");
  const Index n = a.cols();
  if (max_iter <= 0) max_iter = int(3 * n + 10);
  const double eps = std::numeric_limits<double>::epsilon();
  const double wtol = 10.0 * eps * std::max<double>(1.0, a.cwiseAbs().maxCoeff()) * double(std::max(a.rows(), n)) *
                      std::max(1.0, b.norm());

  NnlsResult out;
  out.x = RealVector::Zero(n);
  std::vector<bool> passive(std::size_t(n), false);
  int it = 0;
  for (;;) {
    const RealVector w = a.transpose() * (b - a * out.x);
    Index best = -1;
    double wmax = wtol;
    for (Index j = 0; j < n; ++j)
      if (!passive[std::size_t(j)] && w(j) > wmax) wmax = w(j), best = j;
    if (best < 0) {
      out.converged = true;
      break;
    }
    if (++it > max_iter) break;
    passive[std::size_t(best)] = true;

    RealVector z = passive_solve(a, b, passive);
    for (;;) {
      double alpha = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < n; ++j)
        if (passive[std::size_t(j)] && z(j) <= 0.0 && out.x(j) - z(j) > 0.0)
          alpha = std::min(alpha, out.x(j) / (out.x(j) - z(j)));
      if (!std::isfinite(alpha)) break;
      out.x += alpha * (z - out.x);
      for (Index j = 0; j < n; ++j)
        if (passive[std::size_t(j)] && out.x(j) <= eps) passive[std::size_t(j)] = false, out.x(j) = 0.0;
      z = passive_solve(a, b, passive);
    }
    out.x = z;
  }
  out.iterations = it;
  out.residual = (a * out.x - b).norm();
  return out;
}

}  // namespace qfix
