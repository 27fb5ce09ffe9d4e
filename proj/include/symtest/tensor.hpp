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

#ifndef SYMTEST_TENSOR_HPP
#define SYMTEST_TENSOR_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symtest/common.hpp"

namespace symtest {

inline constexpr double kHermitianTol = 1e-10;  // relative to max |entry|
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kStateNormTol = 1e-12;

bool is_hermitian(const Matrix& a, double rel_tol = kHermitianTol);
bool is_unitary(const Matrix& u, double tol = kUnitaryTol);
Matrix hermitize(Matrix a);

/// Normalized state vector on a d^k-dimensional register.
class PureState {
 public:
  explicit PureState(Vector amplitudes);

  const Vector& amplitudes() const { return amplitudes_; }
  Index dim() const { return amplitudes_.size(); }

 private:
  Vector amplitudes_;
};

/// |bits> in the computational basis, leftmost character = first qubit.
PureState computational_ket(std::string_view bits);

struct Subsystem {
  std::string name;
  Index dim;
};

/// Ordered list of named subsystems. Names are explicit values so link
/// products stay auditable; positions carry no meaning beyond tensor order.
class SystemLabel {
 public:
  SystemLabel() = default;
  SystemLabel(std::initializer_list<Subsystem> parts);
  explicit SystemLabel(std::vector<Subsystem> parts);

  Index total_dim() const;
  std::size_t size() const { return parts_.size(); }
  const Subsystem& at(std::size_t i) const { return parts_[i]; }
  const std::vector<Subsystem>& parts() const { return parts_; }
  bool contains(const std::string& name) const;
  Index dim_of(const std::string& name) const;

 private:
  std::vector<Subsystem> parts_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_power(const Matrix& a, int m);

/// sum_j |j> (x) U^{(x)m}|j> over the computational basis of the input copy;
/// the input index is the most significant block. Rejects non-unitary U.
Vector vectorize_tensor_power(const Matrix& u, int m);

/// U^{(x)m} psi by m sequential mode contractions; the d^m x d^m matrix is
/// never materialized.
Vector apply_tensor_power(const Matrix& u, int m, const Vector& psi);
PureState apply_tensor_power(const Matrix& u, int m, const PureState& psi);

/// Applies U^{(x)k} . U^{(x)k dagger} to a d^k x d^k operator by mode
/// contractions on rows and columns.
Matrix conjugate_tensor_power(const Matrix& u, int k, const Matrix& x);

Matrix permute_subsystems(const Matrix& a, const SystemLabel& labels,
                          const std::vector<std::string>& new_order);

Matrix partial_trace(const Matrix& a, const SystemLabel& labels,
                     const std::vector<std::string>& keep);

Matrix partial_transpose(const Matrix& a, const SystemLabel& labels,
                         const std::vector<std::string>& subset);

/// A * B = tr_shared[(A^{T_shared} (x) I)(I (x) B)]. Shared subsystems are
/// matched by name; the result carries [A-only..., B-only...] in that order
/// (written to out_labels when given). Disjoint labels degenerate to kron.
Matrix link_product(const Matrix& a, const SystemLabel& la, const Matrix& b,
                    const SystemLabel& lb, SystemLabel* out_labels = nullptr);

struct EigResult {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns
};

/// Rejects inputs that fail the Hermiticity tolerance.
EigResult hermitian_eig(const Matrix& a);

}  // namespace symtest

#endif  // SYMTEST_TENSOR_HPP
