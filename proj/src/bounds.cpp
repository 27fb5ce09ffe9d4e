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

#include "symtest/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace symtest {

namespace {

constexpr double kSupportCutoff = 1e-10;   // relative eigenvalue cutoff for supp(Q)
constexpr double kOutsideWeightTol = 1e-9;  // relative to tr(P)
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_psd(const Matrix& a, const char* what) {
  if (!is_hermitian(a)) throw ValidationError(std::string(what) + ": input not Hermitian");
  const EigResult eig = hermitian_eig(a);
  const double scale = std::max(eig.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  if (eig.eigenvalues.minCoeff() < -1e-8 * scale)
    throw ValidationError(std::string(what) + ": input is not positive semidefinite");
}

/// 2^{Dmax(P||Q)} on the support of Q, or +inf. Assumes PSD inputs.
double dmax_ratio(const Matrix& p, const Matrix& q, const Matrix& q_factor) {
  const Matrix basis = detail::support_basis(q, q_factor, kSupportCutoff);
  const Matrix pc = hermitize(basis.adjoint() * p * basis);
  const double tr_p = p.trace().real();
  const double outside = tr_p - pc.trace().real();
  if (outside > kOutsideWeightTol * std::max(tr_p, 1.0)) return kInf;

  const Matrix qc = hermitize(basis.adjoint() * q * basis);
  const EigResult eq = hermitian_eig(qc);
  // qc is full-rank by construction of the basis
  const Matrix w = eq.eigenvectors * eq.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal();
  const Matrix s = hermitize(w.adjoint() * pc * w);  // Q^{-1/2} P Q^{-1/2}
  const double lmax = hermitian_eig(s).eigenvalues.maxCoeff();
  return std::max(lmax, 0.0);
}

}  // namespace

namespace detail {

Matrix support_basis(const Matrix& a, const Matrix& factor, double rel_cutoff) {
  if (factor.size() > 0) {
    const Matrix gram = hermitize(factor.adjoint() * factor);
    const EigResult eig = hermitian_eig(gram);
    const double cutoff = rel_cutoff * eig.eigenvalues.maxCoeff();
    std::vector<Index> keep;
    for (Index i = 0; i < eig.eigenvalues.size(); ++i)
      if (eig.eigenvalues[i] > cutoff) keep.push_back(i);
    Matrix basis(a.rows(), static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const Index i = keep[k];
      basis.col(static_cast<Index>(k)) =
          factor * eig.eigenvectors.col(i) / std::sqrt(eig.eigenvalues[i]);
    }
    return basis;
  }
  const EigResult eig = hermitian_eig(a);
  const double cutoff = rel_cutoff * eig.eigenvalues.cwiseAbs().maxCoeff();
  std::vector<Index> keep;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues[i] > cutoff) keep.push_back(i);
  Matrix basis(a.rows(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    basis.col(static_cast<Index>(k)) = eig.eigenvectors.col(keep[k]);
  return basis;
}

double bisect_feasible_t(const Matrix& omega0_c, const Matrix& omega1_c, double t_hi,
                         double tol) {
  const double scale = omega1_c.cwiseAbs().maxCoeff();
  auto feasible = [&](double t) {
    const Matrix m = hermitize(omega1_c - t * omega0_c);
    return hermitian_eig(m).eigenvalues.minCoeff() >= -1e-9 * scale;
  };
  if (!feasible(0.0)) return 0.0;
  double lo = 0.0, hi = t_hi;
  int grow = 0;
  while (feasible(hi) && grow++ < 90) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

double dmax(const Matrix& p, const Matrix& q) {
  check_psd(p, "dmax");
  check_psd(q, "dmax");
  if (p.rows() != q.rows()) throw ValidationError("dmax: dimension mismatch");
  const double ratio = dmax_ratio(p, q, Matrix());
  if (ratio == kInf) return kInf;
  if (ratio <= 0.0) return -kInf;  // P vanishes on supp(Q)
  return std::log2(ratio);
}

LowerBoundResult lower_bound(const PerformanceOperator& omega0,
                             const PerformanceOperator& omega1, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw ValidationError("lower_bound: epsilon must lie in [0, 1]");
  if (omega0.m != omega1.m || omega0.ensemble.dim != omega1.ensemble.dim)
    throw ValidationError("lower_bound: performance operators have mismatched (m, d)");
  if (omega0.matrix.rows() != omega1.matrix.rows())
    throw ValidationError("lower_bound: dimension mismatch");

  const Matrix basis = detail::support_basis(omega1.matrix, omega1.factor, kSupportCutoff);
  const Matrix p_c = hermitize(basis.adjoint() * omega0.matrix * basis);
  const Matrix q_c = hermitize(basis.adjoint() * omega1.matrix * basis);

  const double tr_p = omega0.matrix.trace().real();
  const double outside = tr_p - p_c.trace().real();
  const bool support_ok = outside <= kOutsideWeightTol * std::max(tr_p, 1.0);

  LowerBoundResult result;
  result.epsilon = epsilon;
  result.support_condition = support_ok;
  if (!support_ok) {
    // t Omega0 <= Omega1 forces t = 0 when Omega0 leaks out of supp(Omega1).
    result.t_star = 0.0;
    result.dmax_bits = kInf;
    result.beta_low = 0.0;
    return result;
  }

  const EigResult eq = hermitian_eig(q_c);
  const Matrix w = eq.eigenvectors * eq.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal();
  const Matrix s = hermitize(w.adjoint() * p_c * w);
  const double lmax = hermitian_eig(s).eigenvalues.maxCoeff();
  if (lmax <= 0.0) throw NumericError("lower_bound: degenerate performance operator pair");

  result.t_star = 1.0 / lmax;
  result.dmax_bits = std::log2(lmax);
  result.beta_low = (1.0 - epsilon) * result.t_star;

  // Independent route: bisection on the PSD feasibility predicate.
  const double t_bisect =
      detail::bisect_feasible_t(p_c, q_c, std::max(2.0 * result.t_star, 1e-6), 1e-9);
  if (std::abs(t_bisect - result.t_star) > 1e-7)
    throw NumericError("lower_bound: bisection cross-check disagrees with the "
                       "generalized-eigenvalue route (" +
                       std::to_string(t_bisect) + " vs " + std::to_string(result.t_star) + ")");
  return result;
}

CommonEigenstructure common_eigenspaces(const EnsembleSpec& mu0, int m, double tol) {
  mu0.validate();
  if (mu0.dim != 2) throw ValidationError("common_eigenspaces: d = 2 only");
  if (m < 1 || m > 6) throw ValidationError("common_eigenspaces: m must lie in 1..6");

  const Index dm = Index(1) << m;
  const QuadratureScheme scheme = exact_quadrature(mu0, 2 * m);

  // Generic Hermitian seed; fixed so sector bases are reproducible.
  SeededSource seed_src{0x5EC7025ULL + 0x1000 * static_cast<std::uint64_t>(m) +
                        static_cast<std::uint64_t>(mu0.kind)};
  RandomStream rng = seed_src.stream(0);
  Matrix h(dm, dm);
  for (Index i = 0; i < dm; ++i)
    for (Index j = 0; j < dm; ++j) h(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
  h = hermitize(std::move(h));

  auto twirl_nodes = [&](const Matrix& x) {
    Matrix out = Matrix::Zero(dm, dm);
    for (const auto& node : scheme.nodes)
      out += node.weight * conjugate_tensor_power(node.unitary, m, x);
    return hermitize(std::move(out));
  };

  const Matrix hbar = twirl_nodes(h);
  // hbar sits in the eigenvalue-1 fixed space of the twirl; certify it.
  const double hscale = std::max(hbar.cwiseAbs().maxCoeff(), 1e-300);
  if ((twirl_nodes(hbar) - hbar).cwiseAbs().maxCoeff() > 1e-9 * hscale)
    throw NumericError("common_eigenspaces: twirl output failed the fixed-point check");

  const EigResult eig = hermitian_eig(hbar);

  // Probe with fresh group samples; keep vectors the whole panel certifies.
  constexpr int kProbes = 100;
  std::vector<Matrix> probes;
  probes.reserve(kProbes);
  const SeededSource probe_src = seed_src.fork(1);
  for (int i = 0; i < kProbes; ++i) probes.push_back(sample(mu0, probe_src, i));

  struct Survivor {
    Vector v;
    std::vector<Complex> signature;
  };
  std::vector<Survivor> survivors;
  for (Index i = 0; i < dm; ++i) {
    const Vector v = eig.eigenvectors.col(i);
    std::vector<Complex> signature;
    signature.reserve(kProbes);
    bool keep = true;
    for (const auto& u : probes) {
      const Vector uv = apply_tensor_power(u, m, v);
      const Complex lambda = v.dot(uv);
      if ((uv - lambda * v).norm() > tol) {
        keep = false;
        break;
      }
      signature.push_back(lambda);
    }
    if (keep) survivors.push_back({v, std::move(signature)});
  }

  // Group by matching scalar signatures.
  std::vector<EigenSector> sectors;
  std::vector<std::vector<Vector>> members;
  for (auto& s : survivors) {
    bool placed = false;
    for (std::size_t g = 0; g < sectors.size(); ++g) {
      double dev = 0.0;
      for (int i = 0; i < kProbes; ++i)
        dev = std::max(dev, std::abs(sectors[g].signature[i] - s.signature[i]));
      if (dev <= tol) {
        members[g].push_back(s.v);
        placed = true;
        break;
      }
    }
    if (!placed) {
      sectors.push_back(EigenSector{Matrix(), s.signature});
      members.push_back({s.v});
    }
  }
  for (std::size_t g = 0; g < sectors.size(); ++g) {
    Matrix basis(dm, static_cast<Index>(members[g].size()));
    for (std::size_t k = 0; k < members[g].size(); ++k)
      basis.col(static_cast<Index>(k)) = members[g][k];
    sectors[g].basis = std::move(basis);
  }

  // Deterministic order: larger sectors first, discovery order breaks ties.
  std::stable_sort(sectors.begin(), sectors.end(),
                   [](const EigenSector& a, const EigenSector& b) {
                     return a.basis.cols() > b.basis.cols();
                   });

  return CommonEigenstructure{mu0, m, std::move(sectors)};
}

SectorQuartic::SectorQuartic(Matrix basis, const QuadratureScheme& mu1_scheme, int m)
    : basis_(std::move(basis)), n_(basis_.cols()) {
  if (mu1_scheme.degree < 2 * m)
    throw ValidationError("SectorQuartic: scheme degree must be at least 2m");
  coupling_ = Matrix::Zero(n_ * n_, n_ * n_);
  Vector g(n_ * n_);
  for (const auto& node : mu1_scheme.nodes) {
    Matrix ub = basis_;
    for (Index c = 0; c < n_; ++c)
      ub.col(c) = apply_tensor_power(node.unitary, m, Vector(basis_.col(c)));
    const Matrix gm = basis_.adjoint() * ub;  // G(U) = B^dagger U^{(x)m} B
    for (Index i = 0; i < n_; ++i)
      for (Index j = 0; j < n_; ++j) g[i * n_ + j] = gm(i, j);
    coupling_.noalias() += node.weight * (g.conjugate() * g.transpose());
  }
  coupling_ = hermitize(std::move(coupling_));
}

namespace {

/// y[(i,j)] = conj(c_i) c_j so that q = y^dagger M y.
Vector pair_vector(const Vector& c) {
  const Index n = c.size();
  Vector y(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) y[i * n + j] = std::conj(c[i]) * c[j];
  return y;
}

}  // namespace

double SectorQuartic::value(const Vector& c) const {
  const Vector y = pair_vector(c);
  return (y.dot(coupling_ * y)).real();
}

Vector SectorQuartic::gradient(const Vector& c) const {
  const Index n = n_;
  const Vector y = pair_vector(c);
  const Vector u = coupling_ * y;  // u[(i,j)]
  Vector grad = Vector::Zero(n);
  // dq/d(conj c_a) = sum_i c_i u[(i,a)] + sum_l conj(u[(a,l)]) c_l
  for (Index a = 0; a < n; ++a) {
    Complex acc = 0.0;
    for (Index i = 0; i < n; ++i) acc += c[i] * u[i * n + a];
    for (Index l = 0; l < n; ++l) acc += std::conj(u[a * n + l]) * c[l];
    grad[a] = 2.0 * acc;
  }
  return grad;
}

UpperBoundResult optimize_protocol(const EnsembleSpec& mu0, const EnsembleSpec& mu1, int m,
                                   int restarts, const SeededSource& src) {
  mu0.validate();
  mu1.validate();
  if (m < 1 || m > 6) throw ValidationError("optimize_protocol: m must lie in 1..6");
  if (restarts < 1) throw ValidationError("optimize_protocol: need at least one restart");

  constexpr double kGradTol = 1e-10;
  constexpr int kMaxIters = 20000;

  bool found = false;
  double best_q = kInf;
  Vector best_psi;
  int best_sector = -1, best_m = 0;

  std::uint64_t restart_counter = 0;
  for (int mp = 1; mp <= m; ++mp) {
    const CommonEigenstructure ces = common_eigenspaces(mu0, mp);
    if (ces.sectors.empty()) continue;
    const QuadratureScheme mu1_scheme = exact_quadrature(mu1, 2 * mp);

    for (std::size_t sec = 0; sec < ces.sectors.size(); ++sec) {
      const SectorQuartic quartic(ces.sectors[sec].basis, mu1_scheme, mp);
      const Index n = quartic.dim();

      double sector_best = kInf;
      Vector sector_c;
      for (int r = 0; r < restarts; ++r) {
        RandomStream rng = src.stream(restart_counter++);
        Vector c(n);
        for (Index i = 0; i < n; ++i)
          c[i] = Complex(rng.next_gaussian(), rng.next_gaussian());
        c /= c.norm();

        double q = quartic.value(c);
        double step = 0.5;
        for (int it = 0; it < kMaxIters; ++it) {
          const Vector g = quartic.gradient(c);
          const Vector rg = g - c.dot(g) * c;  // tangent + phase projection
          if (rg.norm() <= kGradTol) break;
          bool moved = false;
          while (step > 1e-18) {
            Vector c2 = c - step * rg;
            c2 /= c2.norm();
            const double q2 = quartic.value(c2);
            if (q2 < q) {
              c = std::move(c2);
              q = q2;
              moved = true;
              break;
            }
            step *= 0.5;
          }
          if (!moved) break;
          step = std::min(step * 1.5, 1.0);
        }
        if (q < sector_best) {
          sector_best = q;
          sector_c = c;
        }
      }

      if (sector_best < best_q - 1e-12) {
        best_q = sector_best;
        best_psi = quartic.basis() * sector_c;
        best_sector = static_cast<int>(sec);
        best_m = mp;
        found = true;
      }
    }
  }

  if (!found)
    throw NumericError(
        "optimize_protocol: no zero-type-I protocol exists (no common eigenspace at any "
        "m' <= m)");

  // Fix the global phase: first significant coefficient real positive.
  Index lead = 0;
  while (lead < best_psi.size() - 1 && std::abs(best_psi[lead]) < 1e-10) ++lead;
  const Complex z = best_psi[lead];
  if (std::abs(z) > 0) best_psi *= std::conj(z) / std::abs(z);
  best_psi /= best_psi.norm();

  UpperBoundResult result{best_q, PureState(std::move(best_psi)), best_sector, best_m,
                          restarts};
  return result;
}

Certificate certify(const LowerBoundResult& lower, const UpperBoundResult& upper, double tol) {
  Certificate cert;
  cert.epsilon = lower.epsilon;
  cert.beta_low = lower.beta_low;
  cert.beta_up = (1.0 - lower.epsilon) * upper.beta_up;
  cert.t_star = lower.t_star;
  cert.dmax_bits = lower.dmax_bits;
  cert.gap = cert.beta_up - cert.beta_low;
  if (cert.gap < -tol)
    throw NumericError("certify: lower bound exceeds upper bound by " +
                       std::to_string(-cert.gap) + "; this indicates a bug");
  cert.status = std::abs(cert.gap) <= tol ? CertStatus::Optimal : CertStatus::Gap;
  return cert;
}

}  // namespace symtest
