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

#ifndef SYMTEST_BOUNDS_HPP
#define SYMTEST_BOUNDS_HPP

#include <limits>
#include <string>
#include <vector>

#include "symtest/perf_operator.hpp"
#include "symtest/protocols.hpp"

namespace symtest {

/// D_max(P||Q) = inf{lambda : P <= 2^lambda Q} in bits. P is projected onto
/// supp(Q) (eigenvalue cutoff 1e-10 ||Q||); weight above 1e-9 tr(P) outside
/// the support yields +infinity. Rejects non-PSD inputs.
double dmax(const Matrix& p, const Matrix& q);

struct LowerBoundResult {
  double t_star = 0.0;     // optimal dual variable, = 2^{-dmax_bits}
  double dmax_bits = 0.0;  // +infinity when the support condition fails
  double epsilon = 0.0;
  double beta_low = 0.0;  // (1 - epsilon) t_star
  bool support_condition = false;
};

/// max (1-eps) t s.t. Omega1 - t Omega0 >= 0, solved through the
/// generalized-eigenvalue form t* = 2^{-Dmax(Omega0||Omega1)} and
/// cross-validated by bisection on the PSD feasibility predicate.
LowerBoundResult lower_bound(const PerformanceOperator& omega0,
                             const PerformanceOperator& omega1, double epsilon);

/// Subspace on which U^{(x)m} acts by a scalar for (almost) all U in the
/// group; `signature` holds that scalar on each probe unitary.
struct EigenSector {
  Matrix basis;  // d^m x k, orthonormal columns
  std::vector<Complex> signature;
};

struct CommonEigenstructure {
  EnsembleSpec group;
  int m = 0;
  std::vector<EigenSector> sectors;  // may be empty (no zero-type-I protocol)
};

/// Twirls a generic Hermitian into the group commutant (exact quadrature),
/// eigendecomposes it, keeps eigenvectors that 100 sampled group elements
/// certify as common eigenvectors, and groups them by scalar signature.
CommonEigenstructure common_eigenspaces(const EnsembleSpec& mu0, int m, double tol = 1e-8);

/// q(c) = E_{mu1} |<psi(c)|U^{(x)m}|psi(c)>|^2 restricted to a sector basis:
/// a quartic form carried by the coupling tensor
/// M[(ij),(kl)] = E[ G_ij conj(G_kl) ], G(U) = B^dagger U^{(x)m} B.
class SectorQuartic {
 public:
  SectorQuartic(Matrix basis, const QuadratureScheme& mu1_scheme, int m);

  Index dim() const { return n_; }
  const Matrix& basis() const { return basis_; }
  const Matrix& coupling() const { return coupling_; }

  double value(const Vector& c) const;
  /// Real-geometry gradient 2 dq/d(conj c); project out the c-component for
  /// the Riemannian gradient on the sphere.
  Vector gradient(const Vector& c) const;

 private:
  Matrix basis_;
  Index n_;
  Matrix coupling_;  // n^2 x n^2 Hermitian PSD
};

struct UpperBoundResult {
  double beta_up = 0.0;
  PureState psi_opt;
  int sector_index = -1;
  int effective_m = 0;  // queries actually used (<= m)
  int restarts = 0;
};

/// Minimizes the sector-restricted quartic by projected gradient descent on
/// the unit sphere (analytic gradient, step halving, random restarts) over
/// every sector of common_eigenspaces(mu0, m') for m' = 1..m; returns the
/// global best. Throws NumericError when no sector exists at any m'.
UpperBoundResult optimize_protocol(const EnsembleSpec& mu0, const EnsembleSpec& mu1, int m,
                                   int restarts, const SeededSource& src);

enum class CertStatus { Optimal, Gap };

struct Certificate {
  double beta_low = 0.0;
  double beta_up = 0.0;
  double gap = 0.0;
  double t_star = 0.0;
  double dmax_bits = 0.0;
  double epsilon = 0.0;
  CertStatus status = CertStatus::Gap;
};

/// Both bounds scale by (1 - epsilon); OPTIMAL when they meet within tol.
/// lower > upper beyond tol signals a bug and throws.
Certificate certify(const LowerBoundResult& lower, const UpperBoundResult& upper, double tol);

namespace detail {

/// Orthonormal basis of supp(A) with the given relative eigenvalue cutoff.
/// Uses the low-rank factor (A = F F^dagger) when provided: the nonzero
/// spectrum then comes from the factor Gram matrix instead of a dense
/// d^{2m}-dimensional eigendecomposition.
Matrix support_basis(const Matrix& a, const Matrix& factor, double rel_cutoff);

/// Largest t with B^dagger(Omega1 - t Omega0)B >= -tol found by bisection.
double bisect_feasible_t(const Matrix& omega0_c, const Matrix& omega1_c, double t_hi,
                         double tol);

}  // namespace detail

}  // namespace symtest

#endif  // SYMTEST_BOUNDS_HPP
