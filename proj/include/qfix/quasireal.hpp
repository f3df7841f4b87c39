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

// Quasi-realizations of stationary processes over a finite alphabet, and
// verification of polyhedral-cone conditions for a given cone.

#include <string>
#include <vector>

#include "qfix/kernels.hpp"
#include "qfix/linops.hpp"

namespace qfix::quasireal {

using Word = std::vector<std::string>;

/// Word probabilities p(u_1 ... u_l) = pi D(u_1) ... D(u_l) tau, with pi a
/// row vector (stored as a column) and tau a column vector.
struct QuasiRealization {
  Index dim = 0;
  std::vector<std::string> alphabet;
  RealVector pi;
  std::vector<RealMatrix> d_maps;
  RealVector tau;

  /// Non-empty alphabet of distinct symbols, one dim x dim map per symbol.
  void validate() const;
  /// Position of a symbol in the alphabet; throws ValidationError if absent.
  std::size_t symbol_index(const std::string& symbol) const;
};

double word_probability(const QuasiRealization& q, const Word& word);

/// Enumeration cap on |alphabet|^length.
inline constexpr std::size_t kMaxWords = 1000000;

struct WordDistribution {
  int length = 0;
  /// Lexicographic in alphabet order, first symbol most significant.
  std::vector<Word> words;
  std::vector<double> probabilities;

  double total() const;
};

/// All words of one length; throws ValidationError past kMaxWords.
WordDistribution word_distribution(const QuasiRealization& q, int length,
                                   Execution exec = Execution::kParallel);

/// D^c = sum over the alphabet of D(u).
RealMatrix cause_matrix(const QuasiRealization& q);

struct PositivityReport {
  bool nonneg = false;
  bool stochastic = false;
  bool stationary = false;
  bool tau_ones = false;

  bool all() const { return nonneg && stochastic && stationary && tau_ones; }
};

PositivityReport is_positive_realization(const QuasiRealization& q, double tol = 1e-9);

/// Conic hull of finitely many non-zero generators.
struct PolyhedralCone {
  std::vector<RealVector> generators;

  static PolyhedralCone orthant(Index dim);
  Index dim() const;
  void validate() const;
};

struct ConeMembership {
  bool member = false;
  /// Non-negative combination weights over the generators.
  RealVector coefficients;
  double residual = 0.0;
};

/// Membership by non-negative least squares; member when the residual is at
/// most tol * (1 + |v|).
ConeMembership cone_membership(const PolyhedralCone& cone, const RealVector& v, double tol = 1e-8);

/// False when some -g_i lies in the cone, which happens exactly when the cone
/// contains a line.
bool is_pointed(const PolyhedralCone& cone, double tol = 1e-8);

struct DharmadhikariReport {
  bool tau_in_cone = false;
  bool maps_preserve_cone = false;
  bool pi_in_dual = false;
  bool pointed = false;
  /// Generator index and symbol of the first generator mapped outside the cone.
  std::string detail;

  bool all() const { return tau_in_cone && maps_preserve_cone && pi_in_dual && pointed; }
};

DharmadhikariReport check_dharmadhikari(const QuasiRealization& q, const PolyhedralCone& cone,
                                        double tol = 1e-8);

/// Same process in new coordinates: D -> T^-1 D T, tau -> T^-1 tau, pi -> pi T.
QuasiRealization change_basis(const QuasiRealization& q, const RealMatrix& t);

}  // namespace qfix::quasireal
