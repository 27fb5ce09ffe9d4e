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

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "symtest/bounds.hpp"
#include "symtest/io.hpp"
#include "symtest/protocols.hpp"

namespace {

using namespace symtest;
using nlohmann::json;

struct GlobalOpts {
  std::uint64_t seed = kDefaultSeed;
  std::string method = "quadrature";
  std::uint64_t samples = kDefaultMcSamples;
  double tolerance = 1e-9;
  std::string output;
  bool json_out = false;
};

BuildMethod parse_method(const std::string& name) { return build_method_from_name(name); }

void emit(const GlobalOpts& g, const std::string& text) {
  if (!g.output.empty()) {
    std::ofstream out(g.output);
    if (!out) throw ValidationError("cannot open output file '" + g.output + "'");
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
  } else {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  }
}

json base_report(const GlobalOpts& g, BuildMethod method) {
  json j;
  j["version"] = kVersion;
  j["method"] = build_method_name(method);
  if (method == BuildMethod::MonteCarlo) {
    j["samples"] = g.samples;
    j["seed"] = g.seed;
  }
  return j;
}

struct WilsonInterval {
  double center, lo, hi;
};

WilsonInterval wilson(double p_hat, std::uint64_t n, double z) {
  const double nn = static_cast<double>(n);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p_hat + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {center, center - half, center + half};
}

// ---------------------------------------------------------------------------

int cmd_omega(const GlobalOpts& g, const std::string& ensemble_name_arg, int m) {
  EnsembleSpec ensemble{ensemble_kind_from_name(ensemble_name_arg), 2};
  const BuildMethod method = parse_method(g.method);
  PerformanceOperator omega = build_omega(ensemble, m, method, g.samples, g.seed);
  validate_performance_operator(omega);

  const std::string path = g.output.empty()
                               ? "omega-" + ensemble_name(ensemble.kind) + "-m" +
                                     std::to_string(m) + ".cmat"
                               : g.output;
  OmegaFileMeta meta{m, ensemble, method, omega.sample_count, omega.seed};
  write_cmat_file(path, omega.matrix, true, meta);

  // Spectrum summary: direct for small operators, factor Gram otherwise.
  double min_eig = 0.0;
  Index rank = 0;
  const double scale_tol = 1e-10;
  if (omega.matrix.rows() <= 1024) {
    const EigResult eig = hermitian_eig(omega.matrix);
    min_eig = eig.eigenvalues.minCoeff();
    rank = (eig.eigenvalues.array() > scale_tol * eig.eigenvalues.maxCoeff()).count();
  } else if (omega.factor.size() > 0) {
    const EigResult eig = hermitian_eig(hermitize(omega.factor.adjoint() * omega.factor));
    min_eig = std::min(0.0, eig.eigenvalues.minCoeff());
    rank = (eig.eigenvalues.array() > scale_tol * eig.eigenvalues.maxCoeff()).count();
  } else {
    min_eig = std::nan("");
    rank = -1;
  }
  std::cerr << "omega " << ensemble_name(ensemble.kind) << " m=" << m
            << ": trace=" << omega.matrix.trace().real() << " min_eig=" << min_eig
            << " rank=" << rank << " -> " << path << "\n";
  return 0;
}

int cmd_protocol_eval(const GlobalOpts& g, const std::string& symmetry_arg, int m,
                      const std::string& naive_split) {
  const Symmetry sym = symmetry_from_name(symmetry_arg);
  const BuildMethod method = parse_method(g.method);
  const EnsembleSpec haar{EnsembleKind::HaarUnitary, 2};

  EigenstateProtocol protocol = [&] {
    if (naive_split.empty()) return paper_protocol(sym, m);
    std::vector<EigenstateProtocol> parts;
    std::stringstream ss(naive_split);
    std::string tok;
    int total = 0;
    while (std::getline(ss, tok, '+')) {
      const int mi = std::stoi(tok);
      parts.push_back(paper_protocol(sym, mi));
      total += mi;
    }
    if (m != 0 && m != total)
      throw ValidationError("protocol-eval: --m disagrees with the --naive split");
    return compose_repetition(parts);
  }();

  TestReport report = type_errors(protocol, haar, method, g.samples, g.seed);
  if (naive_split.empty()) {
    try {
      report.expected = closed_form_beta(sym, ProtocolKind::Optimal, protocol.m);
    } catch (const ValidationError&) {
    }
  }

  json j = base_report(g, method);
  j["schema"] = "symtest-report-v1";
  j["symmetry"] = symmetry_name(sym);
  j["m"] = protocol.m;
  if (!naive_split.empty()) j["naive"] = naive_split;
  j["alpha"] = report.alpha;
  j["beta"] = report.beta;
  if (report.expected) j["expected"] = report.expected->str();
  emit(g, j.dump(2));

  if (report.expected && method != BuildMethod::MonteCarlo &&
      std::abs(report.beta - report.expected->value()) > g.tolerance) {
    std::cerr << "beta deviates from " << report.expected->str() << " beyond tolerance\n";
    return 1;
  }
  return 0;
}

int cmd_bounds(const GlobalOpts& g, const std::string& symmetry_arg, int m, double epsilon,
               int restarts) {
  const Symmetry sym = symmetry_from_name(symmetry_arg);
  const EnsembleSpec mu0 = symmetry_ensemble(sym);
  const EnsembleSpec haar{EnsembleKind::HaarUnitary, 2};

  const PerformanceOperator omega0 = build_omega(mu0, m, BuildMethod::Quadrature);
  const PerformanceOperator omega1 = build_omega(haar, m, BuildMethod::Quadrature);
  const LowerBoundResult low = lower_bound(omega0, omega1, epsilon);
  const UpperBoundResult up = optimize_protocol(mu0, haar, m, restarts, SeededSource{g.seed});
  const Certificate cert = certify(low, up, std::max(g.tolerance, 1e-6));

  json j = base_report(g, BuildMethod::Quadrature);
  j["schema"] = "symtest-certificate-v1";
  j["symmetry"] = symmetry_name(sym);
  j["m"] = m;
  j["epsilon"] = epsilon;
  j["beta_low"] = cert.beta_low;
  j["beta_up"] = cert.beta_up;
  j["gap"] = cert.gap;
  j["status"] = cert.status == CertStatus::Optimal ? "OPTIMAL" : "GAP";
  j["t_star"] = cert.t_star;
  j["dmax_bits"] = cert.dmax_bits;
  j["effective_m"] = up.effective_m;
  j["restarts"] = up.restarts;
  j["seed"] = g.seed;
  emit(g, j.dump(2));
  return cert.status == CertStatus::Optimal ? 0 : 1;
}

int cmd_reproduce_tables(const GlobalOpts& g) {
  const BuildMethod method = parse_method(g.method);
  const EnsembleSpec haar{EnsembleKind::HaarUnitary, 2};

  struct Row {
    Symmetry sym;
    int m;
  };
  const Row rows[] = {{Symmetry::T, 2}, {Symmetry::T, 4}, {Symmetry::T, 6}, {Symmetry::Z, 1},
                      {Symmetry::Z, 2}, {Symmetry::Z, 3}, {Symmetry::Z, 4}, {Symmetry::Z, 5}};

  std::ostringstream csv;
  csv << "# schema=symtest-tables-v1 version=" << kVersion
      << " method=" << build_method_name(method);
  if (method == BuildMethod::MonteCarlo)
    csv << " samples=" << g.samples << " seed=" << g.seed;
  csv << "\nsymmetry,m,beta_computed,beta_expected,abs_err,pass\n";

  bool all_pass = true;
  for (const auto& row : rows) {
    const Rational expected = closed_form_beta(row.sym, ProtocolKind::Optimal, row.m);
    const EigenstateProtocol protocol = paper_protocol(row.sym, row.m);

    double beta = 0.0, pass_margin = g.tolerance;
    if (method == BuildMethod::MonteCarlo) {
      // 1x1 statistic so the estimate carries its own standard error.
      auto stat = [&](const Matrix& u) {
        const Vector phi = apply_tensor_power(u, row.m, protocol.psi.amplitudes());
        Matrix one(1, 1);
        one(0, 0) = std::norm(protocol.psi.amplitudes().dot(phi));
        return one;
      };
      const McMatrixEstimate est = monte_carlo_matrix(haar, g.samples, g.seed, 1, 1, stat);
      beta = est.mean(0, 0).real();
      pass_margin = 3.0 * est.standard_error(0, 0);
    } else {
      beta = type_errors(protocol, haar, method).beta;
    }

    const double err = std::abs(beta - expected.value());
    const bool pass = err <= pass_margin;
    all_pass = all_pass && pass;
    csv << symmetry_name(row.sym) << ',' << row.m << ',';
    csv.precision(15);
    csv << beta << ',' << expected.str() << ',' << err << ',' << (pass ? "true" : "false")
        << '\n';
  }
  emit(g, csv.str());
  return all_pass ? 0 : 1;
}

int cmd_decay_scan(const GlobalOpts& g, const std::string& symmetry_arg, int m_max) {
  const Symmetry sym = symmetry_from_name(symmetry_arg);
  if (m_max > 6) throw ValidationError("decay-scan: m_max must be <= 6");

  std::vector<int> ms;
  if (sym == Symmetry::Z) {
    for (int m = 1; m <= std::min(m_max, 5); ++m) ms.push_back(m);
  } else {
    for (int m = 2; m <= m_max; m += 2) ms.push_back(m);
  }
  if (ms.empty())
    throw ValidationError("decay-scan: no tabulated protocols at or below m_max");

  std::ostringstream csv;
  csv << "# schema=symtest-decay-v1 version=" << kVersion << "\n";
  csv << "m,beta_optimal,beta_naive\n";
  std::vector<double> lx, ly_opt, ly_naive;
  for (int m : ms) {
    const Rational opt = closed_form_beta(sym, ProtocolKind::Optimal, m);
    // naive series: k repetitions of the base protocol (1-slot for Z, 2-slot for T)
    const int k = (sym == Symmetry::Z) ? m : m / 2;
    const Rational naive = closed_form_beta(sym, ProtocolKind::Naive, k);
    csv.precision(15);
    csv << m << ',' << opt.value() << ',' << naive.value() << '\n';
    lx.push_back(std::log(m));
    ly_opt.push_back(std::log(opt.value()));
    ly_naive.push_back(std::log(naive.value()));
  }

  if (ms.size() >= 2) {
    auto slope = [&](const std::vector<double>& ly) {
      const double n = static_cast<double>(lx.size());
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
      }
      mx /= n;
      my /= n;
      double cov = 0, var = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        cov += (lx[i] - mx) * (ly[i] - my);
        var += (lx[i] - mx) * (lx[i] - mx);
      }
      return cov / var;
    };
    csv << "# loglog_slope_optimal=" << slope(ly_opt)
        << " loglog_slope_naive=" << slope(ly_naive) << "\n";
  }
  emit(g, csv.str());
  return 0;
}

int cmd_simulate(const GlobalOpts& g, const std::string& symmetry_arg, int m,
                 std::uint64_t shots, const std::string& truth) {
  if (shots == 0) throw ValidationError("simulate: --shots must be >= 1");
  const Symmetry sym = symmetry_from_name(symmetry_arg);
  const EigenstateProtocol protocol = paper_protocol(sym, m);

  const bool symmetric_truth = (truth == "symmetric");
  if (!symmetric_truth && truth != "haar")
    throw ValidationError("simulate: --truth must be 'symmetric' or 'haar'");
  const EnsembleSpec truth_ensemble =
      symmetric_truth ? protocol.symmetry : EnsembleSpec{EnsembleKind::HaarUnitary, 2};

  // One fresh truth unitary per trial, one shot each.
  const SeededSource truth_src = SeededSource{g.seed}.fork(1);
  const SeededSource shot_src = SeededSource{g.seed}.fork(2);
  std::uint64_t flag0 = 0;
  for (std::uint64_t trial = 0; trial < shots; ++trial) {
    const Matrix u = sample(truth_ensemble, truth_src, trial);
    const ShotCounts counts = simulate(protocol, u, 1, shot_src.fork(trial));
    flag0 += counts.flag0;
  }
  const double p0 = static_cast<double>(flag0) / static_cast<double>(shots);
  // flag 0 = accept-symmetric: alpha = 1 - p0 under mu0, beta = p0 under mu1
  const double rate = symmetric_truth ? 1.0 - p0 : p0;
  const WilsonInterval ci = wilson(rate, shots, 1.959964);

  json j = base_report(g, BuildMethod::MonteCarlo);
  j["schema"] = "symtest-simulate-v1";
  j["symmetry"] = symmetry_name(sym);
  j["m"] = m;
  j["truth"] = truth;
  j["trials"] = shots;
  j["seed"] = g.seed;
  j["error_kind"] = symmetric_truth ? "alpha" : "beta";
  j["empirical"] = rate;
  j["wilson95"] = {ci.lo, ci.hi};
  emit(g, j.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypothesis testing of symmetry in quantum dynamics"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master seed for stochastic runs");
  app.add_option("--method", g.method, "quadrature or monte-carlo");
  app.add_option("--samples", g.samples, "Monte Carlo sample count");
  app.add_option("--tolerance", g.tolerance, "pass/fail tolerance");
  app.add_option("--output", g.output, "write the report to this file");
  app.add_flag("--json", g.json_out, "emit JSON (default for report commands)");

  std::string ensemble_arg = "unitary", symmetry_arg = "T", naive_split, truth = "haar";
  int m = 2, m_max = 6, restarts = 24;
  double epsilon = 0.0;
  std::uint64_t shots = 100000;

  auto* omega_cmd = app.add_subcommand("omega", "build a performance operator file");
  omega_cmd->add_option("--ensemble", ensemble_arg, "unitary|orthogonal|diagonal|so2")
      ->required();
  omega_cmd->add_option("--m", m, "query count")->required();

  auto* eval_cmd = app.add_subcommand("protocol-eval", "evaluate a library protocol");
  eval_cmd->add_option("--symmetry", symmetry_arg, "T or Z")->required();
  eval_cmd->add_option("--m", m, "query count");
  eval_cmd->add_option("--naive", naive_split, "compose repetitions, e.g. 2+2 or 1+3");

  auto* bounds_cmd = app.add_subcommand("bounds", "match lower and upper bounds");
  bounds_cmd->add_option("--symmetry", symmetry_arg, "T or Z")->required();
  bounds_cmd->add_option("--m", m, "query count")->required();
  bounds_cmd->add_option("--epsilon", epsilon, "type-I error tolerance");
  bounds_cmd->add_option("--restarts", restarts, "optimizer restarts");

  app.add_subcommand("reproduce-tables", "recompute both paper tables");

  auto* decay_cmd = app.add_subcommand("decay-scan", "optimal vs naive error decay");
  decay_cmd->add_option("--symmetry", symmetry_arg, "T or Z")->required();
  decay_cmd->add_option("--m-max", m_max, "largest query count");

  auto* sim_cmd = app.add_subcommand("simulate", "shot-based protocol simulation");
  sim_cmd->add_option("--symmetry", symmetry_arg, "T or Z")->required();
  sim_cmd->add_option("--m", m, "query count")->required();
  sim_cmd->add_option("--shots", shots, "number of single-shot trials");
  sim_cmd->add_option("--truth", truth, "symmetric or haar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (omega_cmd->parsed()) return cmd_omega(g, ensemble_arg, m);
    if (eval_cmd->parsed()) return cmd_protocol_eval(g, symmetry_arg, m, naive_split);
    if (bounds_cmd->parsed()) return cmd_bounds(g, symmetry_arg, m, epsilon, restarts);
    if (app.get_subcommand("reproduce-tables")->parsed()) return cmd_reproduce_tables(g);
    if (decay_cmd->parsed()) return cmd_decay_scan(g, symmetry_arg, m_max);
    if (sim_cmd->parsed()) return cmd_simulate(g, symmetry_arg, m, shots, truth);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
