// Copyright 2026 The nveng authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nv/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nv/nvphys.hpp"
#include "nv/version.hpp"

namespace nv {

std::string format_double(double v) {
  // Shortest decimal form that parses back to exactly the same double.
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string density_matrix_to_text(const Matrix4cd& rho) {
  std::ostringstream os;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double re = rho(i, j).real();
      const double im = rho(i, j).imag();
      if (j) os << ' ';
      os << format_double(re) << (im < 0 ? '-' : '+')
         << format_double(std::abs(im)) << 'j';
    }
    os << '\n';
  }
  return os.str();
}

Matrix4cd density_matrix_from_text(const std::string& text) {
  Matrix4cd rho;
  std::istringstream in(text);
  std::string tok;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (!(in >> tok))
        throw std::runtime_error(
            "density grid: expected 16 fields, input ended early");
      if (tok.empty() || tok.back() != 'j')
        throw std::runtime_error("density grid: field '" + tok +
                                 "' lacks the trailing 'j'");
      const std::string body = tok.substr(0, tok.size() - 1);
      // Split at the sign of the imaginary part: the last '+' or '-' that is
      // not an exponent sign.
      std::size_t split = std::string::npos;
      for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') &&
            body[k - 1] != 'e' && body[k - 1] != 'E') {
          split = k;
          break;
        }
      }
      if (split == std::string::npos)
        throw std::runtime_error("density grid: cannot split field '" + tok +
                                 "' into re/im parts");
      try {
        const double re = std::stod(body.substr(0, split));
        const double im = std::stod(body.substr(split));
        rho(i, j) = std::complex<double>(re, im);
      } catch (const std::exception&) {
        throw std::runtime_error("density grid: cannot parse field '" + tok +
                                 "'");
      }
    }
  return rho;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_contour_csv(const std::string& path,
                       const std::vector<double>& polarizations,
                       const std::vector<double>& g_grid,
                       const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != static_cast<Eigen::Index>(polarizations.size()) ||
      matrix.cols() != static_cast<Eigen::Index>(g_grid.size()))
    throw std::invalid_argument("write_contour_csv: axis/matrix shape mismatch");
  std::ostringstream os;
  os << "polarization";
  for (double g : g_grid) os << ',' << format_double(g);
  os << '\n';
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    os << format_double(polarizations[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < matrix.cols(); ++j)
      os << ',' << format_double(matrix(i, j));
    os << '\n';
  }
  write_text_file(path, os.str());
}

void write_trace_csv(const std::string& path, const TraceResult& trace) {
  std::ostringstream os;
  os << "t_seconds,concurrence,J_L,J_R\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    os << format_double(trace.times[i]) << ','
       << format_double(trace.concurrence[i]) << ','
       << format_double(trace.heat_L[i]) << ','
       << format_double(trace.heat_R[i]) << '\n';
  write_text_file(path, os.str());
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<double>& times,
                          const std::vector<Matrix4cd>& states) {
  if (times.size() != states.size())
    throw std::invalid_argument("write_trajectory_csv: length mismatch");
  std::ostringstream os;
  os << "t_seconds";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      os << ",rho_" << i << j << "_re,rho_" << i << j << "_im";
  os << '\n';
  for (std::size_t k = 0; k < times.size(); ++k) {
    os << format_double(times[k]);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        os << ',' << format_double(states[k](i, j).real()) << ','
           << format_double(states[k](i, j).imag());
    os << '\n';
  }
  write_text_file(path, os.str());
}

void write_manifest(const std::string& path, const Config& resolved_config,
                    const std::string& params_hash,
                    const std::vector<ManifestEntry>& outputs) {
  nlohmann::ordered_json doc;
  doc["tool"] = "nveng";
  doc["tool_version"] = kVersion;
  doc["registry_version"] = kRegistryFormatVersion;
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  doc["created_utc"] = stamp;
  doc["params_hash"] = params_hash;
  doc["resolved_config"] = resolved_config.to_text();
  auto& outs = doc["outputs"] = nlohmann::ordered_json::array();
  for (const auto& entry : outputs)
    outs.push_back({{"path", entry.path}, {"kind", entry.kind}});
  write_text_file(path, doc.dump(2) + "\n");
}

std::string manifest_embedded_config(const std::string& path) {
  const auto doc = nlohmann::json::parse(read_text_file(path));
  if (!doc.contains("resolved_config"))
    throw std::runtime_error("manifest lacks a resolved_config field: " + path);
  return doc["resolved_config"].get<std::string>();
}

}  // namespace nv
