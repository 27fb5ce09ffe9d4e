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

#ifndef SYMTEST_IO_HPP
#define SYMTEST_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "symtest/perf_operator.hpp"

namespace symtest {

/// CMAT1 container: one UTF-8 JSON header line
/// {"format":"CMAT1","rows":R,"cols":C,"hermitian":bool}, then a newline,
/// then R*C little-endian float64 (re, im) pairs in row-major order.
/// Performance operators extend the header with an "omega" object.

struct OmegaFileMeta {
  int m = 0;
  EnsembleSpec ensemble;
  BuildMethod method = BuildMethod::Quadrature;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

void write_cmat(std::ostream& out, const Matrix& matrix, bool hermitian,
                const std::optional<OmegaFileMeta>& omega = std::nullopt);
void write_cmat_file(const std::string& path, const Matrix& matrix, bool hermitian,
                     const std::optional<OmegaFileMeta>& omega = std::nullopt);

struct CmatContents {
  Matrix matrix;
  bool hermitian = false;
  std::optional<OmegaFileMeta> omega;
};

CmatContents read_cmat(std::istream& in);
CmatContents read_cmat_file(const std::string& path);

PerformanceOperator read_omega_file(const std::string& path);

/// State files: {"dim":D,"amplitudes":[[re,im],...]}.
void write_state_file(const std::string& path, const PureState& psi);
PureState read_state_file(const std::string& path);

/// Quadrature schemes: {"ensemble":...,"degree":...,
/// "nodes":[{"weight":w,"unitary":<base64 CMAT1>},...]}.
std::string quadrature_to_json(const QuadratureScheme& scheme);
QuadratureScheme quadrature_from_json(const std::string& text);

std::string base64_encode(const std::string& bytes);
std::string base64_decode(const std::string& text);

}  // namespace symtest

#endif  // SYMTEST_IO_HPP
