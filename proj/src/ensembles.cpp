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

#include "symtest/ensembles.hpp"

#include <cmath>
#include <numbers>

#include "symtest/tensor.hpp"

namespace symtest {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix ginibre_complex(int d, RandomStream& rng) {
  Matrix g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const double re = rng.next_gaussian();
      const double im = rng.next_gaussian();
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return g;
}

RealMatrix ginibre_real(int d, RandomStream& rng) {
  RealMatrix g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = rng.next_gaussian();
  return g;
}

/// QR with the R-diagonal normalization that makes Q Haar-distributed
/// (plain householderQ alone is not Haar; the phase of diag(R) must be fixed).
Matrix haar_from_complex_ginibre(int d, RandomStream& rng) {
  const Matrix g = ginibre_complex(d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0) ? rjj / mag : Complex(1.0, 0.0);
  }
  return q;
}

Matrix haar_from_real_ginibre(int d, RandomStream& rng) {
  const RealMatrix g = ginibre_real(d, rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q.cast<Complex>();
}

Matrix rotation2(double t) {
  Matrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

// det = -1 branch of O(2)
Matrix reflection2(double t) {
  Matrix f(2, 2);
  f << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
  return f;
}

}  // namespace

std::string ensemble_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::HaarUnitary: return "haar_unitary";
    case EnsembleKind::HaarOrthogonal: return "haar_orthogonal";
    case EnsembleKind::HaarDiagonal: return "haar_diagonal";
    case EnsembleKind::HaarSpecialOrthogonal: return "haar_special_orthogonal";
  }
  throw ValidationError("ensemble_name: unknown kind");
}

EnsembleKind ensemble_kind_from_name(const std::string& name) {
  if (name == "haar_unitary" || name == "unitary") return EnsembleKind::HaarUnitary;
  if (name == "haar_orthogonal" || name == "orthogonal") return EnsembleKind::HaarOrthogonal;
  if (name == "haar_diagonal" || name == "diagonal") return EnsembleKind::HaarDiagonal;
  if (name == "haar_special_orthogonal" || name == "so2")
    return EnsembleKind::HaarSpecialOrthogonal;
  throw ValidationError("unknown ensemble '" + name + "'");
}

S3Point::S3Point(double a, double b, double c, double d) : p0(a), p1(b), p2(c), p3(d) {
  const double n2 = p0 * p0 + p1 * p1 + p2 * p2 + p3 * p3;
  if (std::abs(n2 - 1.0) > 1e-12)
    throw ValidationError("S3Point: coordinates are not on the unit sphere");
}

Matrix su2_from_point(const S3Point& p) {
  Matrix u(2, 2);
  u(0, 0) = Complex(p.p0, p.p3);
  u(0, 1) = Complex(p.p2, p.p1);
  u(1, 0) = Complex(-p.p2, p.p1);
  u(1, 1) = Complex(p.p0, -p.p3);
  return u;
}

double QuadratureScheme::total_weight() const {
  double s = 0.0;
  for (const auto& n : nodes) s += n.weight;
  return s;
}

QuadratureScheme exact_quadrature(const EnsembleSpec& ensemble, int degree) {
  ensemble.validate();
  if (ensemble.dim != 2)
    throw ValidationError(
        "exact_quadrature: only d = 2 is supported; use Monte Carlo for d > 2");
  if (degree < 0) throw ValidationError("exact_quadrature: negative degree");

  QuadratureScheme scheme;
  scheme.ensemble = ensemble;
  scheme.degree = degree;
  const int nf = degree + 1;  // Fourier node count per angle

  switch (ensemble.kind) {
    case EnsembleKind::HaarUnitary: {
      // Hopf coordinates: p = (cos t cos a, cos t sin a, sin t cos b, sin t sin b),
      // uniform S^3 <=> a, b uniform on the circle and u = sin^2 t uniform on [0,1].
      const int nu = (degree + 3) / 2;  // ceil((degree+2)/2)
      auto [us, ws] = gauss_legendre_01(nu);
      scheme.nodes.reserve(static_cast<std::size_t>(nu) * nf * nf);
      for (int iu = 0; iu < nu; ++iu) {
        const double theta = std::asin(std::sqrt(us[iu]));
        const double ct = std::cos(theta), st = std::sin(theta);
        for (int ia = 0; ia < nf; ++ia) {
          const double a = 2.0 * kPi * ia / nf;
          for (int ib = 0; ib < nf; ++ib) {
            const double b = 2.0 * kPi * ib / nf;
            const S3Point p(ct * std::cos(a), ct * std::sin(a), st * std::cos(b),
                            st * std::sin(b));
            scheme.nodes.push_back({su2_from_point(p), ws[iu] / (nf * nf)});
          }
        }
      }
      break;
    }
    case EnsembleKind::HaarOrthogonal: {
      scheme.nodes.reserve(2 * nf);
      for (int k = 0; k < nf; ++k) {
        const double t = 2.0 * kPi * k / nf;
        scheme.nodes.push_back({rotation2(t), 0.5 / nf});
        scheme.nodes.push_back({reflection2(t), 0.5 / nf});
      }
      break;
    }
    case EnsembleKind::HaarSpecialOrthogonal: {
      scheme.nodes.reserve(nf);
      for (int k = 0; k < nf; ++k)
        scheme.nodes.push_back({rotation2(2.0 * kPi * k / nf), 1.0 / nf});
      break;
    }
    case EnsembleKind::HaarDiagonal: {
      scheme.nodes.reserve(static_cast<std::size_t>(nf) * nf);
      for (int j = 0; j < nf; ++j) {
        for (int k = 0; k < nf; ++k) {
          Matrix u = Matrix::Zero(2, 2);
          u(0, 0) = std::polar(1.0, 2.0 * kPi * j / nf);
          u(1, 1) = std::polar(1.0, 2.0 * kPi * k / nf);
          scheme.nodes.push_back({std::move(u), 1.0 / (nf * nf)});
        }
      }
      break;
    }
  }
  return scheme;
}

Matrix sample(const EnsembleSpec& ensemble, const SeededSource& src, std::uint64_t index) {
  ensemble.validate();
  RandomStream rng = src.stream(index);
  const int d = ensemble.dim;
  switch (ensemble.kind) {
    case EnsembleKind::HaarUnitary:
      return haar_from_complex_ginibre(d, rng);
    case EnsembleKind::HaarOrthogonal:
      return haar_from_real_ginibre(d, rng);
    case EnsembleKind::HaarSpecialOrthogonal: {
      Matrix o = haar_from_real_ginibre(d, rng);
      if (o.real().determinant() < 0) o.col(0) = -o.col(0);
      return o;
    }
    case EnsembleKind::HaarDiagonal: {
      Matrix u = Matrix::Zero(d, d);
      for (Index j = 0; j < d; ++j) u(j, j) = std::polar(1.0, 2.0 * kPi * rng.next_double());
      return u;
    }
  }
  throw ValidationError("sample: unknown ensemble kind");
}

Rational s3_monomial_moment(int k0, int k1, int k2, int k3) {
  const int ks[4] = {k0, k1, k2, k3};
  std::int64_t num = 1;
  int total = 0;
  for (int k : ks) {
    if (k < 0) throw ValidationError("s3_monomial_moment: negative exponent");
    total += k;
    for (int j = 2 * k - 1; j >= 1; j -= 2) num *= j;  // (2k-1)!!
  }
  std::int64_t den = 1;
  for (int j = 0; j < total; ++j) den *= 4 + 2 * j;
  return Rational(num, den);
}

std::pair<RealVector, RealVector> gauss_legendre_01(int n) {
  if (n < 1) throw ValidationError("gauss_legendre_01: need at least one node");
  RealVector x(n), w(n);
  // Newton iteration on P_n over [-1, 1], Chebyshev initial guesses.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double weight = 2.0 / ((1.0 - z * z) * pp * pp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = weight;
    w[n - 1 - i] = weight;
  }
  // map [-1,1] -> [0,1]
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (x[i] + 1.0);
    w[i] *= 0.5;
  }
  return {x, w};
}

}  // namespace symtest
