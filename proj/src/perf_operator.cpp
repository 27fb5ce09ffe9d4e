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

#include "symtest/perf_operator.hpp"

#include <cmath>

#include "symtest/parallel.hpp"

namespace symtest {

namespace {

Index pow_index(Index base, int exp) {
  Index out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

int popcount_index(Index x) {
  int c = 0;
  while (x) {
    c += static_cast<int>(x & 1);
    x >>= 1;
  }
  return c;
}

void check_omega_args(const EnsembleSpec& ensemble, int m) {
  ensemble.validate();
  if (m < 1) throw ValidationError("build_omega: m must be >= 1");
  Index dim = 1;
  for (int i = 0; i < 2 * m; ++i) {
    dim *= ensemble.dim;
    if (dim > kMaxOmegaDim)
      throw ValidationError("build_omega: d^(2m) exceeds the dense-storage guard of " +
                            std::to_string(kMaxOmegaDim) +
                            " (d = " + std::to_string(ensemble.dim) +
                            ", m = " + std::to_string(m) + ")");
  }
}

struct MeanVarAcc {
  Matrix sum;
  RealMatrix sumsq;  // of |entry|^2
  std::uint64_t count = 0;
};

}  // namespace

std::string build_method_name(BuildMethod method) {
  switch (method) {
    case BuildMethod::Quadrature: return "quadrature";
    case BuildMethod::ClosedForm: return "closed_form";
    case BuildMethod::MonteCarlo: return "monte_carlo";
  }
  throw ValidationError("build_method_name: unknown method");
}

BuildMethod build_method_from_name(const std::string& name) {
  if (name == "quadrature") return BuildMethod::Quadrature;
  if (name == "closed_form" || name == "closed-form") return BuildMethod::ClosedForm;
  if (name == "monte_carlo" || name == "monte-carlo") return BuildMethod::MonteCarlo;
  throw ValidationError("unknown build method '" + name + "'");
}

McMatrixEstimate monte_carlo_matrix(const EnsembleSpec& ensemble, std::uint64_t samples,
                                    std::uint64_t seed, Index rows, Index cols,
                                    const std::function<Matrix(const Matrix&)>& statistic) {
  if (samples == 0) throw ValidationError("monte_carlo_matrix: need at least one sample");
  const SeededSource src{seed};
  const std::size_t acc_bytes =
      static_cast<std::size_t>(rows) * cols * (sizeof(Complex) + sizeof(double));
  const int blocks = accumulator_block_count(acc_bytes);

  auto make = [&]() {
    return MeanVarAcc{Matrix::Zero(rows, cols), RealMatrix::Zero(rows, cols), 0};
  };
  auto body = [&](MeanVarAcc& acc, std::uint64_t i) {
    const Matrix u = sample(ensemble, src, i);
    const Matrix value = statistic(u);
    acc.sum += value;
    acc.sumsq += value.cwiseAbs2();
    acc.count += 1;
  };
  auto merge = [](MeanVarAcc& into, MeanVarAcc& from) {
    into.sum += from.sum;
    into.sumsq += from.sumsq;
    into.count += from.count;
  };
  MeanVarAcc total = blocked_reduce<MeanVarAcc>(samples, blocks, make, body, merge);

  McMatrixEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.mean = total.sum / static_cast<double>(samples);
  // per-entry complex variance: E|X|^2 - |EX|^2
  RealMatrix var =
      total.sumsq / static_cast<double>(samples) - est.mean.cwiseAbs2();
  var = var.cwiseMax(0.0);
  est.standard_error = (var / static_cast<double>(samples)).cwiseSqrt();
  return est;
}

PerformanceOperator build_omega(const EnsembleSpec& ensemble, int m, BuildMethod method,
                                std::uint64_t samples, std::uint64_t seed) {
  check_omega_args(ensemble, m);
  const Index dim = pow_index(ensemble.dim, 2 * m);

  PerformanceOperator omega;
  omega.m = m;
  omega.ensemble = ensemble;
  omega.method = method;

  switch (method) {
    case BuildMethod::Quadrature: {
      const QuadratureScheme scheme = exact_quadrature(ensemble, 2 * m);
      Matrix factor(dim, static_cast<Index>(scheme.nodes.size()));
      for (std::size_t q = 0; q < scheme.nodes.size(); ++q) {
        factor.col(static_cast<Index>(q)) =
            std::sqrt(scheme.nodes[q].weight) *
            vectorize_tensor_power(scheme.nodes[q].unitary, m);
      }
      Matrix mat(dim, dim);
      mat.setZero();
      mat.selfadjointView<Eigen::Lower>().rankUpdate(factor);
      omega.matrix = mat.selfadjointView<Eigen::Lower>();
      omega.factor = std::move(factor);
      break;
    }
    case BuildMethod::ClosedForm: {
      if (ensemble.kind != EnsembleKind::HaarDiagonal || ensemble.dim != 2)
        throw ValidationError(
            "build_omega: closed form is available for the d = 2 diagonal ensemble only");
      return build_omega_diagonal_closed_form(m);
    }
    case BuildMethod::MonteCarlo: {
      if (samples == 0) throw ValidationError("build_omega: need at least one MC sample");
      const SeededSource src{seed};
      const std::size_t acc_bytes = static_cast<std::size_t>(dim) * dim * sizeof(Complex);
      const int blocks = accumulator_block_count(acc_bytes);
      auto make = [&]() { return Matrix(Matrix::Zero(dim, dim)); };
      auto body = [&](Matrix& acc, std::uint64_t i) {
        const Vector v = vectorize_tensor_power(sample(ensemble, src, i), m);
        acc.selfadjointView<Eigen::Lower>().rankUpdate(v);
      };
      auto merge = [](Matrix& into, Matrix& from) { into += from; };
      Matrix acc = blocked_reduce<Matrix>(samples, blocks, make, body, merge);
      acc /= static_cast<double>(samples);
      omega.matrix = acc.selfadjointView<Eigen::Lower>();
      omega.sample_count = samples;
      omega.seed = seed;
      break;
    }
  }
  return omega;
}

PerformanceOperator build_omega_diagonal_closed_form(int m) {
  const EnsembleSpec ensemble{EnsembleKind::HaarDiagonal, 2};
  check_omega_args(ensemble, m);
  const Index dm = pow_index(2, m);

  // One unnormalized block vector sum_{wt(x)=w} |x,x> per Hamming weight.
  Matrix factor = Matrix::Zero(dm * dm, m + 1);
  for (Index x = 0; x < dm; ++x) factor(x * dm + x, popcount_index(x)) = 1.0;

  PerformanceOperator omega;
  omega.m = m;
  omega.ensemble = ensemble;
  omega.method = BuildMethod::ClosedForm;
  omega.matrix = factor * factor.adjoint();
  omega.factor = std::move(factor);
  return omega;
}

void validate_performance_operator(const PerformanceOperator& omega, Index psd_eig_dim_limit) {
  const Index dim = omega.matrix.rows();
  if (omega.matrix.cols() != dim)
    throw NumericError("PerformanceOperator: matrix not square");
  if (dim != pow_index(omega.ensemble.dim, 2 * omega.m))
    throw NumericError("PerformanceOperator: dimension does not equal d^(2m)");
  if (!is_hermitian(omega.matrix))
    throw NumericError("PerformanceOperator: matrix is not Hermitian within 1e-10");

  const double dm = std::pow(static_cast<double>(omega.ensemble.dim), omega.m);
  const double trace = omega.matrix.trace().real();
  if (std::abs(trace - dm) > 1e-9 * dm)
    throw NumericError("PerformanceOperator: trace " + std::to_string(trace) +
                       " deviates from d^m = " + std::to_string(dm));

  if (dim <= psd_eig_dim_limit) {
    const EigResult eig = hermitian_eig(omega.matrix);
    const double scale = eig.eigenvalues.cwiseAbs().maxCoeff();
    if (eig.eigenvalues.minCoeff() < -1e-9 * scale)
      throw NumericError("PerformanceOperator: negative eigenvalue beyond tolerance");
  } else if (omega.factor.size() > 0) {
    // Gram spectrum carries the nonzero eigenvalues of factor * factor^dagger.
    const Matrix gram = hermitize(omega.factor.adjoint() * omega.factor);
    const EigResult eig = hermitian_eig(gram);
    const double scale = eig.eigenvalues.cwiseAbs().maxCoeff();
    if (eig.eigenvalues.minCoeff() < -1e-9 * scale)
      throw NumericError("PerformanceOperator: negative factor-Gram eigenvalue");
  }
}

Matrix twirl(const Matrix& x, const EnsembleSpec& ensemble, int k, BuildMethod method,
             std::uint64_t samples, std::uint64_t seed) {
  ensemble.validate();
  if (k < 1) throw ValidationError("twirl: k must be >= 1");
  const Index dk = pow_index(ensemble.dim, k);
  if (x.rows() != dk || x.cols() != dk)
    throw ValidationError("twirl: operator dimension does not match d^k");

  switch (method) {
    case BuildMethod::Quadrature: {
      const QuadratureScheme scheme = exact_quadrature(ensemble, 2 * k);
      Matrix out = Matrix::Zero(dk, dk);
      for (const auto& node : scheme.nodes)
        out += node.weight * conjugate_tensor_power(node.unitary, k, x);
      return out;
    }
    case BuildMethod::ClosedForm: {
      if (ensemble.kind != EnsembleKind::HaarUnitary)
        throw ValidationError("twirl: closed forms exist for the Haar-unitary ensemble only");
      const double d = static_cast<double>(ensemble.dim);
      if (k == 1) {
        return (x.trace() / d) * Matrix::Identity(dk, dk);
      }
      if (k == 2) {
        // E U^{+(x)2} X U^{(x)2} = [tr(X) I + tr(SX) S] / (d^2-1)
        //                        - [tr(X) S + tr(SX) I] / (d(d^2-1))
        const Index dd = ensemble.dim;
        Matrix swap = Matrix::Zero(dk, dk);
        for (Index i = 0; i < dd; ++i)
          for (Index j = 0; j < dd; ++j) swap(i * dd + j, j * dd + i) = 1.0;
        const Complex trx = x.trace();
        const Complex trsx = (swap * x).trace();
        const Matrix eye = Matrix::Identity(dk, dk);
        return (trx * eye + trsx * swap) / (d * d - 1.0) -
               (trx * swap + trsx * eye) / (d * (d * d - 1.0));
      }
      throw ValidationError("twirl: no closed form beyond k = 2");
    }
    case BuildMethod::MonteCarlo: {
      auto stat = [&](const Matrix& u) { return conjugate_tensor_power(u, k, x); };
      return monte_carlo_matrix(ensemble, samples, seed, dk, dk, stat).mean;
    }
  }
  throw ValidationError("twirl: unknown method");
}

double overlap_moment(const PureState& psi, const EnsembleSpec& ensemble, int m,
                      BuildMethod method, std::uint64_t samples, std::uint64_t seed) {
  ensemble.validate();
  const Index dm = pow_index(ensemble.dim, m);
  if (psi.dim() != dm)
    throw ValidationError("overlap_moment: state dimension does not match d^m");

  auto term = [&](const Matrix& u) {
    const Vector phi = apply_tensor_power(u, m, psi.amplitudes());
    const Complex amp = psi.amplitudes().dot(phi);  // <psi|phi>
    return std::norm(amp);
  };

  if (method == BuildMethod::Quadrature || method == BuildMethod::ClosedForm) {
    const QuadratureScheme scheme = exact_quadrature(ensemble, 2 * m);
    double acc = 0.0;
    for (const auto& node : scheme.nodes) acc += node.weight * term(node.unitary);
    return acc;
  }

  const SeededSource src{seed};
  auto make = [] { return 0.0; };
  auto body = [&](double& acc, std::uint64_t i) { acc += term(sample(ensemble, src, i)); };
  auto merge = [](double& into, double& from) { into += from; };
  const double sum = blocked_reduce<double>(samples, 64, make, body, merge);
  return sum / static_cast<double>(samples);
}

double overlap_moment_via_omega(const PerformanceOperator& omega, const PureState& psi) {
  const Index dm = psi.dim();
  if (omega.matrix.rows() != dm * dm)
    throw ValidationError("overlap_moment_via_omega: dimension mismatch");
  // sandwich = conj(|psi><psi|) (x) |psi><psi| applied as a quadratic form:
  // the input (first) block carries the conjugated copy.
  const Vector s = [&] {
    Vector v(dm * dm);
    for (Index j = 0; j < dm; ++j)
      v.segment(j * dm, dm) = std::conj(psi.amplitudes()[j]) * psi.amplitudes();
    return v;
  }();
  const Complex val = s.dot(omega.matrix * s);  // s^dagger Omega s
  return val.real();
}

}  // namespace symtest
