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

#ifndef SYMTEST_TESTS_TEST_UTIL_HPP
#define SYMTEST_TESTS_TEST_UTIL_HPP

#include <cmath>

#include "symtest/ensembles.hpp"
#include "symtest/tensor.hpp"

namespace symtest::testutil {

inline Matrix random_unitary(int d, std::uint64_t seed) {
  return sample(EnsembleSpec{EnsembleKind::HaarUnitary, d}, SeededSource{seed}, 0);
}

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  RandomStream rng = SeededSource{seed}.stream(0);
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      a(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
  return a;
}

inline Matrix random_hermitian(Index n, std::uint64_t seed) {
  return hermitize(random_matrix(n, n, seed));
}

inline Matrix random_psd(Index n, std::uint64_t seed) {
  const Matrix a = random_matrix(n, n, seed);
  return hermitize(a * a.adjoint());
}

inline PureState random_state(Index n, std::uint64_t seed) {
  Vector v = random_matrix(n, 1, seed).col(0);
  v /= v.norm();
  return PureState(std::move(v));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// sum_j |j> (x) K|j> for arbitrary (not necessarily unitary) K; independent
/// of the library's vectorization path.
inline Vector naive_vec(const Matrix& k) {
  const Index d = k.rows();
  Vector v(d * d);
  for (Index j = 0; j < d; ++j) v.segment(j * d, d) = k.col(j);
  return v;
}

/// Bulk z-score comparison of a Monte Carlo mean against an exact matrix.
/// A literal per-entry 3-sigma assert fails with probability ~1 over many
/// entries, so the criterion is chi^2-style: sum z^2 <= n + 6 sqrt(2n),
/// max |z| capped, zero-variance entries held to an absolute floor.
struct BulkZResult {
  double chi2 = 0.0;
  double max_z = 0.0;
  std::size_t entries = 0;
  std::size_t floor_violations = 0;

  bool pass(double max_z_cap = 8.0) const {
    const double n = static_cast<double>(entries);
    return floor_violations == 0 && max_z <= max_z_cap &&
           chi2 <= n + 6.0 * std::sqrt(2.0 * n);
  }
};

inline BulkZResult bulk_z_compare(const Matrix& exact, const Matrix& mean,
                                  const RealMatrix& standard_error,
                                  double abs_floor = 1e-9) {
  BulkZResult result;
  result.entries = static_cast<std::size_t>(exact.size());
  for (Index r = 0; r < exact.rows(); ++r) {
    for (Index c = 0; c < exact.cols(); ++c) {
      const double dev = std::abs(mean(r, c) - exact(r, c));
      const double se = standard_error(r, c);
      if (se > 1e-14) {
        const double z = dev / se;
        result.chi2 += z * z;
        result.max_z = std::max(result.max_z, z);
      } else if (dev > abs_floor) {
        result.floor_violations += 1;
      }
    }
  }
  return result;
}

}  // namespace symtest::testutil

#endif  // SYMTEST_TESTS_TEST_UTIL_HPP
