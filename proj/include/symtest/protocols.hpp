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

#ifndef SYMTEST_PROTOCOLS_HPP
#define SYMTEST_PROTOCOLS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "symtest/perf_operator.hpp"
#include "symtest/rational.hpp"

namespace symtest {

/// T: time-reversal (the unitary is real orthogonal).
/// Z: diagonal in the computational basis.
enum class Symmetry { T, Z };

std::string symmetry_name(Symmetry s);
Symmetry symmetry_from_name(const std::string& name);

/// The symmetry hypothesis ensemble mu_0 (d = 2).
EnsembleSpec symmetry_ensemble(Symmetry s);

/// m-query parallel protocol: prepare psi, apply U^{(x)m}, measure
/// {|psi><psi|, 1 - |psi><psi|} onto a single flag qubit.
struct EigenstateProtocol {
  int m;
  PureState psi;
  EnsembleSpec symmetry;  // the mu_0 this protocol targets
};

struct TestReport {
  double alpha = 0.0;
  double beta = 0.0;
  BuildMethod method = BuildMethod::Quadrature;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<Rational> expected;
};

/// Product of maximally entangled pairs over a perfect matching of the m
/// tensor slots (0-indexed).
PureState matching_state(int m, const std::vector<std::pair<int, int>>& pairs);

/// The tabulated optimal input states: T with m in {2,4,6}, Z with m in 1..5.
PureState paper_state(Symmetry symmetry, int m);
EigenstateProtocol paper_protocol(Symmetry symmetry, int m);

/// alpha = 1 - E_{mu0}|<psi|U^m|psi>|^2, beta = E_{mu1}|<psi|U^m|psi>|^2.
TestReport type_errors(const EigenstateProtocol& protocol, const EnsembleSpec& mu1,
                       BuildMethod method = BuildMethod::Quadrature,
                       std::uint64_t samples = kDefaultMcSamples,
                       std::uint64_t seed = kDefaultSeed);

/// Tensor composition with AND-combined outcomes; all parts must target the
/// same symmetry.
EigenstateProtocol compose_repetition(const std::vector<EigenstateProtocol>& parts);

enum class ProtocolKind { Optimal, Naive };

/// Exact rationals: Z optimal 4/((m+1)(m+3)) odd / 4/(m+2)^2 even (m <= 5);
/// Z naive 1/(k+1); T naive 1/(2k+1); T optimal from Table values m in
/// {2,4,6}. Out-of-range m is rejected, not extrapolated.
Rational closed_form_beta(Symmetry symmetry, ProtocolKind kind, int m_or_k);

/// Choi matrix of the measure channel: |psi><psi| (x) |0><0| +
/// (1 - |psi><psi|) (x) |1><1|, flag qubit last.
struct MeasureChannelChoi {
  Matrix j;
  Index input_dim;
};

MeasureChannelChoi measure_channel(const PureState& psi);

struct ShotCounts {
  std::uint64_t flag0 = 0;
  std::uint64_t flag1 = 0;

  std::uint64_t total() const { return flag0 + flag1; }
};

/// Bernoulli sampling with p(flag = 0) = |<psi|U^{(x)m}|psi>|^2, one
/// substream per shot.
ShotCounts simulate(const EigenstateProtocol& protocol, const Matrix& u, std::uint64_t shots,
                    const SeededSource& src);

/// Convex mixture with the always-reject strategy: (alpha, beta) =
/// (epsilon, (1 - epsilon) beta0). Requires a zero type-I report.
TestReport scale_for_tolerance(const TestReport& report, double epsilon);

}  // namespace symtest

#endif  // SYMTEST_PROTOCOLS_HPP
