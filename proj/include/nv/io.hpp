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

#ifndef NV_IO_HPP
#define NV_IO_HPP

#include <string>
#include <vector>

#include "nv/config.hpp"
#include "nv/experiments.hpp"
#include "nv/linalg.hpp"

namespace nv {

// Shortest-roundtrip decimal rendering shared by every writer, so identical
// doubles always serialize to identical bytes.
std::string format_double(double v);

// 4x4 complex grid, row-major, fields like "0.5+0j" / "0.1-0.25j".
std::string density_matrix_to_text(const Matrix4cd& rho);
Matrix4cd density_matrix_from_text(const std::string& text);

// Contour matrix CSV: header row is the g grid, first column the
// polarization grid.
void write_contour_csv(const std::string& path,
                       const std::vector<double>& polarizations,
                       const std::vector<double>& g_grid,
                       const Eigen::MatrixXd& matrix);

// Time-series CSV: t_seconds, concurrence, J_L, J_R.
void write_trace_csv(const std::string& path, const TraceResult& trace);

// Raw trajectory CSV: t_seconds then the 16 state components, re/im
// interleaved in row-major element order (rho_00.re, rho_00.im, rho_01.re,
// ...), 33 columns total.
void write_trajectory_csv(const std::string& path,
                          const std::vector<double>& times,
                          const std::vector<Matrix4cd>& states);

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory
  std::string kind;  // "contour-csv", "trace-csv", "density-grid", ...
};

// JSON run manifest: tool and registry versions, UTC timestamp, parameter
// hash, the full resolved config (embedded as INI text, so a run can be
// reproduced from the manifest alone), and the output inventory.
void write_manifest(const std::string& path, const Config& resolved_config,
                    const std::string& params_hash,
                    const std::vector<ManifestEntry>& outputs);

// Pulls the embedded config text back out of a manifest file.
std::string manifest_embedded_config(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace nv

#endif  // NV_IO_HPP
