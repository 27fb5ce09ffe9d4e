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

#include "symtest/protocols.hpp"

#include <cmath>
#include <numbers>

#include "symtest/parallel.hpp"

namespace symtest {

namespace {

constexpr double kPi = std::numbers::pi;

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

Vector unnormalized_ket(int m, Index idx) {
  Vector v = Vector::Zero(Index(1) << m);
  v[idx] = 1.0;
  return v;
}

Index bits_to_index(const char* bits) {
  Index idx = 0;
  for (const char* c = bits; *c; ++c) idx = idx * 2 + (*c - '0');
  return idx;
}

}  // namespace

std::string symmetry_name(Symmetry s) { return s == Symmetry::T ? "T" : "Z"; }

Symmetry symmetry_from_name(const std::string& name) {
  if (name == "T" || name == "t") return Symmetry::T;
  if (name == "Z" || name == "z") return Symmetry::Z;
  throw ValidationError("unknown symmetry '" + name + "' (expected T or Z)");
}

EnsembleSpec symmetry_ensemble(Symmetry s) {
  return s == Symmetry::T ? EnsembleSpec{EnsembleKind::HaarOrthogonal, 2}
                          : EnsembleSpec{EnsembleKind::HaarDiagonal, 2};
}

PureState matching_state(int m, const std::vector<std::pair<int, int>>& pairs) {
  if (m < 2 || m % 2 != 0)
    throw ValidationError("matching_state: m must be even and >= 2");
  if (static_cast<int>(pairs.size()) != m / 2)
    throw ValidationError("matching_state: need exactly m/2 pairs");
  std::vector<bool> used(m, false);
  for (auto [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= m || j >= m || i == j || used[i] || used[j])
      throw ValidationError("matching_state: pairs must form a perfect matching");
    used[i] = used[j] = true;
  }

  const Index dim = Index(1) << m;
  Vector v = Vector::Zero(dim);
  const double amp = std::pow(2.0, -0.25 * m);  // (1/sqrt(2))^(m/2)
  for (Index x = 0; x < dim; ++x) {
    bool match = true;
    for (auto [i, j] : pairs) {
      const int bi = static_cast<int>((x >> (m - 1 - i)) & 1);
      const int bj = static_cast<int>((x >> (m - 1 - j)) & 1);
      if (bi != bj) {
        match = false;
        break;
      }
    }
    if (match) v[x] = amp;
  }
  return PureState(std::move(v));
}

PureState paper_state(Symmetry symmetry, int m) {
  if (symmetry == Symmetry::T) {
    const double s5 = std::sqrt(5.0), s7 = std::sqrt(7.0);
    switch (m) {
      case 2:
        return matching_state(2, {{0, 1}});
      case 4: {
        Vector v = (s5 + 1.0) / 4.0 * matching_state(4, {{0, 1}, {2, 3}}).amplitudes() +
                   (s5 - 1.0) / 4.0 * matching_state(4, {{0, 2}, {1, 3}}).amplitudes();
        return PureState(std::move(v));
      }
      case 6: {
        // Three pairwise edge-disjoint matchings. The published subscripts
        // reuse pair 24 across terms 1-2 and pair 13 across terms 1-3, which
        // breaks normalization and the beta = 1/10 value; the wiring guard
        // test pins this choice.
        Vector v =
            (s7 - 2.0) / 6.0 * matching_state(6, {{0, 5}, {1, 3}, {2, 4}}).amplitudes() +
            (s7 + 1.0) / 6.0 * matching_state(6, {{0, 1}, {2, 5}, {3, 4}}).amplitudes() +
            (s7 + 1.0) / 6.0 * matching_state(6, {{0, 2}, {1, 4}, {3, 5}}).amplitudes();
        return PureState(std::move(v));
      }
      default:
        throw ValidationError(
            "paper_state: T-symmetry has tabulated states for m in {2, 4, 6} only; "
            "use optimize_protocol for other m");
    }
  }

  const double s5 = std::sqrt(5.0);
  switch (m) {
    case 1:
      return computational_ket("0");
    case 2: {
      Vector v = std::sin(kPi / 12.0) * unnormalized_ket(2, bits_to_index("01")) +
                 std::cos(kPi / 12.0) * unnormalized_ket(2, bits_to_index("10"));
      return PureState(std::move(v));
    }
    case 3: {
      Vector v = (unnormalized_ket(3, bits_to_index("001")) +
                  unnormalized_ket(3, bits_to_index("010"))) /
                 std::sqrt(2.0);
      return PureState(std::move(v));
    }
    case 4: {
      const double c1 = (s5 + 1.0) / (2.0 * std::sqrt(6.0));
      const double c2 = (s5 - 1.0) / (2.0 * std::sqrt(6.0));
      Vector v = c1 * (unnormalized_ket(4, bits_to_index("0011")) +
                       unnormalized_ket(4, bits_to_index("0110"))) +
                 c2 * (unnormalized_ket(4, bits_to_index("0101")) +
                       unnormalized_ket(4, bits_to_index("1001")));
      return PureState(std::move(v));
    }
    case 5: {
      Vector v = (s5 + 1.0) / 8.0 * (unnormalized_ket(5, bits_to_index("00011")) +
                                     unnormalized_ket(5, bits_to_index("10100"))) +
                 (s5 - 1.0) / 8.0 * (unnormalized_ket(5, bits_to_index("00101")) +
                                     unnormalized_ket(5, bits_to_index("10010"))) +
                 s5 / 4.0 * (unnormalized_ket(5, bits_to_index("00110")) +
                             unnormalized_ket(5, bits_to_index("10001")));
      return PureState(std::move(v));
    }
    default:
      throw ValidationError(
          "paper_state: Z-symmetry has tabulated states for m in 1..5 only; "
          "use optimize_protocol for other m");
  }
}

EigenstateProtocol paper_protocol(Symmetry symmetry, int m) {
  return EigenstateProtocol{m, paper_state(symmetry, m), symmetry_ensemble(symmetry)};
}

TestReport type_errors(const EigenstateProtocol& protocol, const EnsembleSpec& mu1,
                       BuildMethod method, std::uint64_t samples, std::uint64_t seed) {
  TestReport report;
  report.method = method;
  if (method == BuildMethod::MonteCarlo) {
    report.samples = samples;
    report.seed = seed;
  }
  report.alpha =
      1.0 - overlap_moment(protocol.psi, protocol.symmetry, protocol.m, method, samples, seed);
  report.beta = overlap_moment(protocol.psi, mu1, protocol.m, method, samples,
                               seed ^ 0x5BD1E995ULL);
  return report;
}

EigenstateProtocol compose_repetition(const std::vector<EigenstateProtocol>& parts) {
  if (parts.empty()) throw ValidationError("compose_repetition: empty protocol list");
  const EnsembleSpec target = parts.front().symmetry;
  int m = 0;
  Vector psi = Vector::Ones(1);
  for (const auto& p : parts) {
    if (p.symmetry.kind != target.kind || p.symmetry.dim != target.dim)
      throw ValidationError("compose_repetition: parts target different symmetries");
    m += p.m;
    psi = kron_vec(psi, p.psi.amplitudes());
  }
  return EigenstateProtocol{m, PureState(std::move(psi)), target};
}

Rational closed_form_beta(Symmetry symmetry, ProtocolKind kind, int m_or_k) {
  if (m_or_k < 1) throw ValidationError("closed_form_beta: count must be >= 1");
  if (symmetry == Symmetry::Z) {
    if (kind == ProtocolKind::Naive) return Rational(1, m_or_k + 1);
    if (m_or_k > 5)
      throw ValidationError(
          "closed_form_beta: the Z-optimal formula is established for m <= 5 only "
          "(beyond that it is a conjecture)");
    const std::int64_t m = m_or_k;
    return (m % 2 == 1) ? Rational(4, (m + 1) * (m + 3)) : Rational(4, (m + 2) * (m + 2));
  }
  if (kind == ProtocolKind::Naive) return Rational(1, 2 * m_or_k + 1);
  switch (m_or_k) {
    case 2: return Rational(1, 3);
    case 4: return Rational(1, 6);
    case 6: return Rational(1, 10);
    default:
      throw ValidationError(
          "closed_form_beta: T-optimal values are tabulated for m in {2, 4, 6} only");
  }
}

MeasureChannelChoi measure_channel(const PureState& psi) {
  const Index d = psi.dim();
  const Matrix proj = psi.amplitudes() * psi.amplitudes().adjoint();
  const Matrix rest = Matrix::Identity(d, d) - proj;
  Matrix flag0 = Matrix::Zero(2, 2), flag1 = Matrix::Zero(2, 2);
  flag0(0, 0) = 1.0;
  flag1(1, 1) = 1.0;
  return MeasureChannelChoi{kron(proj, flag0) + kron(rest, flag1), d};
}

ShotCounts simulate(const EigenstateProtocol& protocol, const Matrix& u, std::uint64_t shots,
                    const SeededSource& src) {
  if (!is_unitary(u)) throw ValidationError("simulate: truth operator is not unitary");
  const Vector phi = apply_tensor_power(u, protocol.m, protocol.psi.amplitudes());
  const double p0 = std::norm(protocol.psi.amplitudes().dot(phi));

  auto make = [] { return ShotCounts{}; };
  auto body = [&](ShotCounts& acc, std::uint64_t shot) {
    RandomStream rng = src.stream(shot);
    if (rng.next_double() < p0)
      acc.flag0 += 1;
    else
      acc.flag1 += 1;
  };
  auto merge = [](ShotCounts& into, ShotCounts& from) {
    into.flag0 += from.flag0;
    into.flag1 += from.flag1;
  };
  return blocked_reduce<ShotCounts>(shots, 64, make, body, merge);
}

TestReport scale_for_tolerance(const TestReport& report, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw ValidationError("scale_for_tolerance: epsilon must lie in [0, 1]");
  if (std::abs(report.alpha) > 1e-9)
    throw ValidationError("scale_for_tolerance: report must have zero type-I error");
  TestReport out = report;
  out.alpha = epsilon;
  out.beta = (1.0 - epsilon) * report.beta;
  out.expected.reset();
  return out;
}

}  // namespace symtest
