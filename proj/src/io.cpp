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

#include "symtest/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace symtest {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "CMAT1 writer assumes a little-endian host");

void append_f64(std::string& buf, double x) {
  char raw[sizeof(double)];
  std::memcpy(raw, &x, sizeof(double));
  buf.append(raw, sizeof(double));
}

double take_f64(const char*& p) {
  double x;
  std::memcpy(&x, p, sizeof(double));
  p += sizeof(double);
  return x;
}

json omega_meta_to_json(const OmegaFileMeta& meta) {
  json j;
  j["m"] = meta.m;
  j["ensemble"] = ensemble_name(meta.ensemble.kind);
  j["dim"] = meta.ensemble.dim;
  j["method"] = build_method_name(meta.method);
  j["samples"] = meta.samples;
  j["seed"] = meta.seed;
  return j;
}

OmegaFileMeta omega_meta_from_json(const json& j) {
  OmegaFileMeta meta;
  meta.m = j.at("m").get<int>();
  meta.ensemble.kind = ensemble_kind_from_name(j.at("ensemble").get<std::string>());
  meta.ensemble.dim = j.value("dim", 2);
  meta.method = build_method_from_name(j.at("method").get<std::string>());
  meta.samples = j.value("samples", std::uint64_t{0});
  meta.seed = j.value("seed", std::uint64_t{0});
  return meta;
}

}  // namespace

void write_cmat(std::ostream& out, const Matrix& matrix, bool hermitian,
                const std::optional<OmegaFileMeta>& omega) {
  json header;
  header["format"] = "CMAT1";
  header["rows"] = matrix.rows();
  header["cols"] = matrix.cols();
  header["hermitian"] = hermitian;
  if (omega) header["omega"] = omega_meta_to_json(*omega);
  out << header.dump() << '\n';

  std::string buf;
  buf.reserve(static_cast<std::size_t>(matrix.size()) * 2 * sizeof(double));
  for (Index r = 0; r < matrix.rows(); ++r) {
    for (Index c = 0; c < matrix.cols(); ++c) {
      append_f64(buf, matrix(r, c).real());
      append_f64(buf, matrix(r, c).imag());
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw ValidationError("write_cmat: stream write failed");
}

void write_cmat_file(const std::string& path, const Matrix& matrix, bool hermitian,
                     const std::optional<OmegaFileMeta>& omega) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("write_cmat_file: cannot open '" + path + "'");
  write_cmat(out, matrix, hermitian, omega);
}

CmatContents read_cmat(std::istream& in) {
  std::string header_line;
  if (!std::getline(in, header_line))
    throw ValidationError("read_cmat: missing header line");
  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("read_cmat: bad JSON header: ") + e.what());
  }
  if (header.value("format", "") != "CMAT1")
    throw ValidationError("read_cmat: not a CMAT1 file");
  const Index rows = header.at("rows").get<Index>();
  const Index cols = header.at("cols").get<Index>();
  if (rows < 1 || cols < 1) throw ValidationError("read_cmat: bad dimensions");

  CmatContents contents;
  contents.hermitian = header.value("hermitian", false);
  if (header.contains("omega")) contents.omega = omega_meta_from_json(header.at("omega"));

  const std::size_t n_bytes = static_cast<std::size_t>(rows) * cols * 2 * sizeof(double);
  std::string buf(n_bytes, '\0');
  in.read(buf.data(), static_cast<std::streamsize>(n_bytes));
  if (static_cast<std::size_t>(in.gcount()) != n_bytes)
    throw ValidationError("read_cmat: truncated payload");

  contents.matrix.resize(rows, cols);
  const char* p = buf.data();
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const double re = take_f64(p);
      const double im = take_f64(p);
      contents.matrix(r, c) = Complex(re, im);
    }
  }
  if (contents.hermitian && !is_hermitian(contents.matrix))
    throw ValidationError("read_cmat: hermitian flag set but payload is not Hermitian");
  return contents;
}

CmatContents read_cmat_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("read_cmat_file: cannot open '" + path + "'");
  return read_cmat(in);
}

PerformanceOperator read_omega_file(const std::string& path) {
  CmatContents contents = read_cmat_file(path);
  if (!contents.omega)
    throw ValidationError("read_omega_file: file carries no omega metadata");
  PerformanceOperator omega;
  omega.matrix = std::move(contents.matrix);
  omega.m = contents.omega->m;
  omega.ensemble = contents.omega->ensemble;
  omega.method = contents.omega->method;
  omega.sample_count = contents.omega->samples;
  omega.seed = contents.omega->seed;
  return omega;
}

void write_state_file(const std::string& path, const PureState& psi) {
  json j;
  j["dim"] = psi.dim();
  json amps = json::array();
  for (Index i = 0; i < psi.dim(); ++i)
    amps.push_back({psi.amplitudes()[i].real(), psi.amplitudes()[i].imag()});
  j["amplitudes"] = std::move(amps);
  std::ofstream out(path);
  if (!out) throw ValidationError("write_state_file: cannot open '" + path + "'");
  out << j.dump(2) << '\n';
}

PureState read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("read_state_file: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("read_state_file: ") + e.what());
  }
  const Index dim = j.at("dim").get<Index>();
  const auto& amps = j.at("amplitudes");
  if (static_cast<Index>(amps.size()) != dim)
    throw ValidationError("read_state_file: amplitude count does not match dim");
  Vector v(dim);
  for (Index i = 0; i < dim; ++i)
    v[i] = Complex(amps[i].at(0).get<double>(), amps[i].at(1).get<double>());
  return PureState(std::move(v));
}

std::string quadrature_to_json(const QuadratureScheme& scheme) {
  json j;
  j["ensemble"] = ensemble_name(scheme.ensemble.kind);
  j["dim"] = scheme.ensemble.dim;
  j["degree"] = scheme.degree;
  json nodes = json::array();
  for (const auto& node : scheme.nodes) {
    std::ostringstream blob;
    write_cmat(blob, node.unitary, false);
    nodes.push_back({{"weight", node.weight}, {"unitary", base64_encode(blob.str())}});
  }
  j["nodes"] = std::move(nodes);
  return j.dump();
}

QuadratureScheme quadrature_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("quadrature_from_json: ") + e.what());
  }
  QuadratureScheme scheme;
  scheme.ensemble.kind = ensemble_kind_from_name(j.at("ensemble").get<std::string>());
  scheme.ensemble.dim = j.value("dim", 2);
  scheme.degree = j.at("degree").get<int>();
  for (const auto& node : j.at("nodes")) {
    std::istringstream blob(base64_decode(node.at("unitary").get<std::string>()));
    CmatContents contents = read_cmat(blob);
    scheme.nodes.push_back({std::move(contents.matrix), node.at("weight").get<double>()});
  }
  return scheme;
}

namespace {
constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::string& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out += kB64Alphabet[(v >> 18) & 63];
    out += kB64Alphabet[(v >> 12) & 63];
    out += kB64Alphabet[(v >> 6) & 63];
    out += kB64Alphabet[v & 63];
    i += 3;
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out += kB64Alphabet[(v >> 18) & 63];
    out += kB64Alphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out += kB64Alphabet[(v >> 18) & 63];
    out += kB64Alphabet[(v >> 12) & 63];
    out += kB64Alphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::string base64_decode(const std::string& text) {
  int lut[256];
  std::fill(std::begin(lut), std::end(lut), -1);
  for (int i = 0; i < 64; ++i) lut[static_cast<unsigned char>(kB64Alphabet[i])] = i;

  std::string out;
  out.reserve(text.size() / 4 * 3);
  unsigned acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const int v = lut[static_cast<unsigned char>(c)];
    if (v < 0) throw ValidationError("base64_decode: invalid character");
    acc = (acc << 6) | static_cast<unsigned>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((acc >> bits) & 0xFF);
    }
  }
  return out;
}

}  // namespace symtest
