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

#ifndef SYMTEST_PERF_OPERATOR_HPP
#define SYMTEST_PERF_OPERATOR_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "symtest/ensembles.hpp"
#include "symtest/tensor.hpp"

namespace symtest {

enum class BuildMethod { Quadrature, ClosedForm, MonteCarlo };

std::string build_method_name(BuildMethod method);
BuildMethod build_method_from_name(const std::string& name);

inline constexpr std::uint64_t kDefaultMcSamples = 100000;
inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// Dense-storage guard for Omega: d^{2m} entries per row.
inline constexpr Index kMaxOmegaDim = 4096;

/// Omega_mu^(m) = E |U^{(x)m}>><<U^{(x)m}| on a d^{2m}-dimensional space.
/// Hermitian PSD with trace d^m.
struct PerformanceOperator {
  Matrix matrix;
  int m = 0;
  EnsembleSpec ensemble;
  BuildMethod method = BuildMethod::Quadrature;
  std::uint64_t sample_count = 0;  // Monte Carlo only
  std::uint64_t seed = 0;          // Monte Carlo only

  /// For exact builds: matrix == factor * factor^dagger with one column per
  /// quadrature node (weights absorbed). Empty for Monte Carlo builds and
  /// operators loaded from files.
  Matrix factor;
};

PerformanceOperator build_omega(const EnsembleSpec& ensemble, int m, BuildMethod method,
                                std::uint64_t samples = kDefaultMcSamples,
                                std::uint64_t seed = kDefaultSeed);

/// Omega_D^(m) = sum over wt(x) = wt(y) of |x,x><y,y|; phase averaging kills
/// every cross-weight term. Reference implementation the quadrature build
/// must match.
PerformanceOperator build_omega_diagonal_closed_form(int m);

/// Hermitian/PSD/trace contracts. PSD is certified by eigendecomposition up
/// to `psd_eig_dim_limit`; larger operators check the compressed factor
/// spectrum instead (a negative eigenvalue beyond tolerance throws, it is
/// never projected away).
void validate_performance_operator(const PerformanceOperator& omega,
                                   Index psd_eig_dim_limit = 1024);

/// E U^{dagger (x)k} X U^{(x)k}. ClosedForm supports the Haar-unitary
/// k = 1, 2 formulas only.
Matrix twirl(const Matrix& x, const EnsembleSpec& ensemble, int k, BuildMethod method,
             std::uint64_t samples = kDefaultMcSamples, std::uint64_t seed = kDefaultSeed);

/// E |<psi|U^{(x)m}|psi>|^2, evaluated node by node (Omega is never
/// materialized).
double overlap_moment(const PureState& psi, const EnsembleSpec& ensemble, int m,
                      BuildMethod method = BuildMethod::Quadrature,
                      std::uint64_t samples = kDefaultMcSamples,
                      std::uint64_t seed = kDefaultSeed);

/// tr[Omega (conj(|psi><psi|) (x) |psi><psi|)] — the trace form of the same
/// quantity, used to pin the vectorization convention.
double overlap_moment_via_omega(const PerformanceOperator& omega, const PureState& psi);

/// Monte Carlo mean of a matrix statistic with per-entry standard errors
/// (deterministic blocked accumulation; see parallel.hpp).
struct McMatrixEstimate {
  Matrix mean;
  RealMatrix standard_error;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

McMatrixEstimate monte_carlo_matrix(const EnsembleSpec& ensemble, std::uint64_t samples,
                                    std::uint64_t seed, Index rows, Index cols,
                                    const std::function<Matrix(const Matrix&)>& statistic);

}  // namespace symtest

#endif  // SYMTEST_PERF_OPERATOR_HPP
