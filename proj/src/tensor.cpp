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

#include "symtest/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace symtest {

namespace {

// Mixed-radix index helpers: subsystem 0 is the most significant digit.
std::vector<Index> strides_of(const std::vector<Index>& dims) {
  std::vector<Index> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
  return s;
}

std::vector<std::size_t> resolve_names(const SystemLabel& labels,
                                       const std::vector<std::string>& names,
                                       const char* what) {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second)
      throw ValidationError(std::string(what) + ": duplicate subsystem '" + n + "'");
    bool found = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels.at(i).name == n) {
        out.push_back(i);
        found = true;
        break;
      }
    }
    if (!found) throw ValidationError(std::string(what) + ": unknown subsystem '" + n + "'");
  }
  return out;
}

void check_square_with_labels(const Matrix& a, const SystemLabel& labels, const char* what) {
  if (a.rows() != a.cols())
    throw ValidationError(std::string(what) + ": matrix must be square");
  if (a.rows() != labels.total_dim())
    throw ValidationError(std::string(what) + ": label dimensions do not match matrix");
}

}  // namespace

bool is_hermitian(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  Matrix g = u.adjoint() * u;
  g -= Matrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff() <= tol;
}

Matrix hermitize(Matrix a) {
  a = 0.5 * (a + a.adjoint()).eval();
  return a;
}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError("PureState: empty amplitude vector");
  const double n = amplitudes_.norm();
  if (std::abs(n - 1.0) > kStateNormTol)
    throw ValidationError("PureState: vector is not normalized (|norm-1| = " +
                          std::to_string(std::abs(n - 1.0)) + ")");
}

PureState computational_ket(std::string_view bits) {
  if (bits.empty()) throw ValidationError("computational_ket: empty bit string");
  Index idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("computational_ket: expected bits");
    idx = idx * 2 + (c - '0');
  }
  Vector v = Vector::Zero(Index(1) << bits.size());
  v[idx] = 1.0;
  return PureState(std::move(v));
}

SystemLabel::SystemLabel(std::initializer_list<Subsystem> parts)
    : SystemLabel(std::vector<Subsystem>(parts)) {}

SystemLabel::SystemLabel(std::vector<Subsystem> parts) : parts_(std::move(parts)) {
  std::set<std::string> seen;
  for (const auto& p : parts_) {
    if (p.dim < 1) throw ValidationError("SystemLabel: subsystem dimension must be >= 1");
    if (!seen.insert(p.name).second)
      throw ValidationError("SystemLabel: duplicate subsystem name '" + p.name + "'");
  }
}

Index SystemLabel::total_dim() const {
  Index d = 1;
  for (const auto& p : parts_) d *= p.dim;
  return d;
}

bool SystemLabel::contains(const std::string& name) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [&](const Subsystem& p) { return p.name == name; });
}

Index SystemLabel::dim_of(const std::string& name) const {
  for (const auto& p : parts_)
    if (p.name == name) return p.dim;
  throw ValidationError("SystemLabel: unknown subsystem '" + name + "'");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_power(const Matrix& a, int m) {
  if (m < 0) throw ValidationError("kron_power: negative power");
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < m; ++i) out = kron(out, a);
  return out;
}

Vector vectorize_tensor_power(const Matrix& u, int m) {
  if (m < 1) throw ValidationError("vectorize_tensor_power: m must be >= 1");
  if (!is_unitary(u))
    throw ValidationError("vectorize_tensor_power: input is not unitary within 1e-10");
  const Matrix um = kron_power(u, m);
  const Index d = um.rows();
  Vector v(d * d);
  for (Index j = 0; j < d; ++j) v.segment(j * d, d) = um.col(j);
  return v;
}

Vector apply_tensor_power(const Matrix& u, int m, const Vector& psi) {
  if (u.rows() != u.cols()) throw ValidationError("apply_tensor_power: U must be square");
  const Index d = u.rows();
  Index dm = 1;
  for (int i = 0; i < m; ++i) dm *= d;
  if (psi.size() != dm)
    throw ValidationError("apply_tensor_power: state dimension does not match d^m");

  Vector cur = psi;
  Vector tmp(d);
  for (int k = 0; k < m; ++k) {
    // index = L*d*right + i_k*right + R
    Index right = 1;
    for (int j = k + 1; j < m; ++j) right *= d;
    const Index left = dm / (d * right);
    for (Index L = 0; L < left; ++L) {
      for (Index R = 0; R < right; ++R) {
        const Index base = L * d * right + R;
        for (Index i = 0; i < d; ++i) {
          Complex acc = 0.0;
          for (Index j = 0; j < d; ++j) acc += u(i, j) * cur[base + j * right];
          tmp[i] = acc;
        }
        for (Index i = 0; i < d; ++i) cur[base + i * right] = tmp[i];
      }
    }
  }
  return cur;
}

PureState apply_tensor_power(const Matrix& u, int m, const PureState& psi) {
  Vector v = apply_tensor_power(u, m, psi.amplitudes());
  const double n = v.norm();
  if (std::abs(n - 1.0) > 1e-9)
    throw NumericError("apply_tensor_power: output lost normalization; U not unitary?");
  v /= n;
  return PureState(std::move(v));
}

Matrix conjugate_tensor_power(const Matrix& u, int k, const Matrix& x) {
  const Index dk = x.rows();
  if (x.rows() != x.cols()) throw ValidationError("conjugate_tensor_power: X must be square");
  const Matrix udag = u.adjoint();
  Matrix out(dk, dk);
  for (Index c = 0; c < dk; ++c) out.col(c) = apply_tensor_power(udag, k, Vector(x.col(c)));
  // right-multiply by U^{(x)k}: rows of out times U^{(x)k} == conj path on transposes
  Matrix outT = out.transpose();
  for (Index c = 0; c < dk; ++c)
    outT.col(c) = apply_tensor_power(u.transpose(), k, Vector(outT.col(c)));
  return outT.transpose();
}

Matrix permute_subsystems(const Matrix& a, const SystemLabel& labels,
                          const std::vector<std::string>& new_order) {
  check_square_with_labels(a, labels, "permute_subsystems");
  if (new_order.size() != labels.size())
    throw ValidationError("permute_subsystems: order must list every subsystem once");
  const auto pos = resolve_names(labels, new_order, "permute_subsystems");

  std::vector<Index> dims(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) dims[i] = labels.at(i).dim;
  const auto strides = strides_of(dims);

  std::vector<Index> new_dims(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) new_dims[i] = dims[pos[i]];
  const auto new_strides = strides_of(new_dims);

  const Index dim = labels.total_dim();
  // map[new_index] = old_index
  std::vector<Index> map(dim);
  std::vector<Index> digits(pos.size(), 0);
  for (Index ni = 0; ni < dim; ++ni) {
    Index rem = ni, old = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      const Index digit = rem / new_strides[k];
      rem %= new_strides[k];
      old += digit * strides[pos[k]];
    }
    map[ni] = old;
  }

  Matrix out(dim, dim);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c) out(r, c) = a(map[r], map[c]);
  return out;
}

Matrix partial_trace(const Matrix& a, const SystemLabel& labels,
                     const std::vector<std::string>& keep) {
  check_square_with_labels(a, labels, "partial_trace");
  const auto keep_pos = resolve_names(labels, keep, "partial_trace");

  std::vector<bool> kept(labels.size(), false);
  for (auto p : keep_pos) kept[p] = true;

  std::vector<Index> dims(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) dims[i] = labels.at(i).dim;
  const auto strides = strides_of(dims);

  Index keep_dim = 1, trace_dim = 1;
  std::vector<Index> keep_strides, keep_dims, trace_strides, trace_dims;
  for (auto p : keep_pos) {
    keep_dims.push_back(dims[p]);
    keep_strides.push_back(strides[p]);
    keep_dim *= dims[p];
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!kept[i]) {
      trace_dims.push_back(dims[i]);
      trace_strides.push_back(strides[i]);
      trace_dim *= dims[i];
    }
  }

  auto expand = [](Index packed, const std::vector<Index>& ds, const std::vector<Index>& ss) {
    Index full = 0;
    for (int k = static_cast<int>(ds.size()) - 1; k >= 0; --k) {
      full += (packed % ds[k]) * ss[k];
      packed /= ds[k];
    }
    return full;
  };

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (Index r = 0; r < keep_dim; ++r) {
    const Index rf = expand(r, keep_dims, keep_strides);
    for (Index c = 0; c < keep_dim; ++c) {
      const Index cf = expand(c, keep_dims, keep_strides);
      Complex acc = 0.0;
      for (Index t = 0; t < trace_dim; ++t) {
        const Index tf = expand(t, trace_dims, trace_strides);
        acc += a(rf + tf, cf + tf);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& a, const SystemLabel& labels,
                         const std::vector<std::string>& subset) {
  check_square_with_labels(a, labels, "partial_transpose");
  const auto sub_pos = resolve_names(labels, subset, "partial_transpose");
  std::vector<bool> flip(labels.size(), false);
  for (auto p : sub_pos) flip[p] = true;

  std::vector<Index> dims(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) dims[i] = labels.at(i).dim;
  const auto strides = strides_of(dims);
  const Index dim = labels.total_dim();

  auto digit = [&](Index idx, std::size_t k) { return (idx / strides[k]) % dims[k]; };

  Matrix out(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      Index rr = 0, cc = 0;
      for (std::size_t k = 0; k < labels.size(); ++k) {
        const Index rd = digit(r, k), cd = digit(c, k);
        rr += (flip[k] ? cd : rd) * strides[k];
        cc += (flip[k] ? rd : cd) * strides[k];
      }
      out(rr, cc) = a(r, c);
    }
  }
  return out;
}

Matrix link_product(const Matrix& a, const SystemLabel& la, const Matrix& b,
                    const SystemLabel& lb, SystemLabel* out_labels) {
  check_square_with_labels(a, la, "link_product");
  check_square_with_labels(b, lb, "link_product");

  std::vector<std::string> shared, a_only, b_only;
  for (const auto& p : la.parts()) {
    if (lb.contains(p.name)) {
      if (lb.dim_of(p.name) != p.dim)
        throw ValidationError("link_product: shared subsystem '" + p.name +
                              "' has mismatched dimensions");
      shared.push_back(p.name);
    } else {
      a_only.push_back(p.name);
    }
  }
  for (const auto& p : lb.parts())
    if (!la.contains(p.name)) b_only.push_back(p.name);

  // Canonical order [A-only, shared] for A and [shared, B-only] for B.
  std::vector<std::string> a_order = a_only;
  a_order.insert(a_order.end(), shared.begin(), shared.end());
  std::vector<std::string> b_order = shared;
  b_order.insert(b_order.end(), b_only.begin(), b_only.end());

  std::vector<Subsystem> a_parts, b_parts;
  for (const auto& n : a_order) a_parts.push_back({n, la.dim_of(n)});
  for (const auto& n : b_order) b_parts.push_back({n, lb.dim_of(n)});
  const SystemLabel la2(a_parts), lb2(b_parts);

  Matrix a2 = permute_subsystems(a, la, a_order);
  Matrix b2 = permute_subsystems(b, lb, b_order);
  if (!shared.empty()) a2 = partial_transpose(a2, la2, shared);

  Index dim_a_only = 1, dim_b_only = 1;
  for (const auto& n : a_only) dim_a_only *= la.dim_of(n);
  for (const auto& n : b_only) dim_b_only *= lb.dim_of(n);

  const Matrix x = kron(a2, Matrix::Identity(dim_b_only, dim_b_only));
  const Matrix y = kron(Matrix::Identity(dim_a_only, dim_a_only), b2);
  const Matrix z = x * y;

  std::vector<Subsystem> z_parts = a_parts;
  for (const auto& n : b_only) z_parts.push_back({n, lb.dim_of(n)});
  const SystemLabel lz(z_parts);

  std::vector<std::string> keep = a_only;
  keep.insert(keep.end(), b_only.begin(), b_only.end());

  if (out_labels) {
    std::vector<Subsystem> outs;
    for (const auto& n : keep) outs.push_back({n, lz.dim_of(n)});
    *out_labels = SystemLabel(outs);
  }
  if (keep.empty()) {
    Matrix out(1, 1);
    out(0, 0) = z.trace();
    return out;
  }
  return partial_trace(z, lz, keep);
}

EigResult hermitian_eig(const Matrix& a) {
  if (!is_hermitian(a))
    throw ValidationError("hermitian_eig: input is not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(a));
  if (solver.info() != Eigen::Success)
    throw NumericError("hermitian_eig: eigensolver failed to converge");
  return EigResult{solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace symtest
