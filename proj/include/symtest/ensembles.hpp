// Copyright 2026 The symtest authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYMTEST_ENSEMBLES_HPP
#define SYMTEST_ENSEMBLES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "symtest/common.hpp"
#include "symtest/rational.hpp"
#include "symtest/rng.hpp"

namespace symtest {

enum class EnsembleKind {
  HaarUnitary,
  HaarOrthogonal,         // full O(d): rotations and reflections, equal weight
  HaarDiagonal,           // independent uniform phases on the computational basis
  HaarSpecialOrthogonal,  // SO(d) variant; no tabulated reference values
};

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::HaarUnitary;
  int dim = 2;

  void validate() const {
    if (dim < 2) throw ValidationError("EnsembleSpec: dim must be >= 2");
  }
};

std::string ensemble_name(EnsembleKind kind);
EnsembleKind ensemble_kind_from_name(const std::string& name);

/// Point on the unit 3-sphere; coordinates of the SU(2) expansion
/// U = p0 I + i(p1 X + p2 Y + p3 Z).
struct S3Point {
  double p0, p1, p2, p3;

  S3Point(double a, double b, double c, double d);
};

Matrix su2_from_point(const S3Point& p);

struct QuadratureNode {
  Matrix unitary;
  double weight;
};

/// Finite node set whose weighted sum reproduces ensemble expectations of
/// every coordinate monomial up to `degree` exactly. Entries of
/// U^{(x)m} (x) conj(U)^{(x)m} have degree 2m, so degree >= 2m schemes build
/// exact m-query moments.
struct QuadratureScheme {
  EnsembleSpec ensemble;
  int degree = 0;
  std::vector<QuadratureNode> nodes;

  double total_weight() const;
};

/// d = 2 only; other dimensions take the Monte Carlo path.
QuadratureScheme exact_quadrature(const EnsembleSpec& ensemble, int degree);

/// One Haar/uniform sample per (source, index); deterministic and
/// thread-order independent.
Matrix sample(const EnsembleSpec& ensemble, const SeededSource& src, std::uint64_t index);

/// E[p0^{2k0} p1^{2k1} p2^{2k2} p3^{2k3}] over Uni(S^3):
/// prod_i (2k_i - 1)!! / prod_{j=0}^{K-1} (4 + 2j), K = sum k_i.
Rational s3_monomial_moment(int k0, int k1, int k2, int k3);

/// Gauss-Legendre nodes/weights for integral_0^1 f(u) du (weights sum to 1).
std::pair<RealVector, RealVector> gauss_legendre_01(int n);

}  // namespace symtest

#endif  // SYMTEST_ENSEMBLES_HPP
