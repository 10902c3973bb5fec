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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "nv/config.hpp"
#include "nv/experiments.hpp"
#include "nv/io.hpp"
#include "nv/lindblad.hpp"

namespace {

namespace fs = std::filesystem;

// Fresh scratch directory per test binary run.
fs::path scratch_dir() {
  const fs::path dir =
      fs::temp_directory_path() / ("nveng-io-test-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parses sections, comments, and flat keys") {
  const std::string text =
      "# top comment\n"
      "margin = 12.5\n"
      "\n"
      "[engine]\n"
      "# comments are whole-line; values run to the end of the line\n"
      "g = 60e3\n"
      "abundance = 1.1\n"
      "; alt comment style\n"
      "[sweep]\n"
      "objective = steady\n";
  const nv::Config cfg = nv::Config::parse_text(text);
  CHECK(cfg.has("margin"));
  CHECK(cfg.get_double("margin", 0.0) == 12.5);
  CHECK(cfg.get_double("engine.g", 0.0) == 60e3);
  CHECK(cfg.get_string("sweep.objective", "") == "steady");
  CHECK_FALSE(cfg.has("engine.missing"));
  CHECK(cfg.get_int("engine.missing", 7) == 7);
  CHECK(cfg.get_bool("engine.missing", true));
}

TEST_CASE("config rejects duplicates and malformed lines with line numbers") {
  try {
    nv::Config::parse_text("[a]\nx = 1\nx = 2\n");
    FAIL("expected duplicate-key error");
  } catch (const nv::ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(nv::Config::parse_text("just words\n"), nv::ConfigError);
  CHECK_THROWS_AS(nv::Config::parse_text("[unclosed\n"), nv::ConfigError);
}

TEST_CASE("config type errors carry the field name") {
  const nv::Config cfg = nv::Config::parse_text("[engine]\ng = sixty\n");
  try {
    cfg.get_double("engine.g", 0.0);
    FAIL("expected type error");
  } catch (const nv::ConfigError& e) {
    CHECK(e.field() == "engine.g");
  }
  CHECK_THROWS_AS(cfg.require_double("engine.absent"), nv::ConfigError);
  CHECK_THROWS_AS(cfg.require_string("engine.absent"), nv::ConfigError);
  CHECK(cfg.require_string("engine.g") == "sixty");
}

TEST_CASE("config text round trip preserves every entry") {
  nv::Config cfg = nv::Config::parse_text(
      "top = 1\n[b]\nx = 2\n[a]\ny = 3\nz = hello\n");
  cfg.set("a.w", "4");
  const nv::Config back = nv::Config::parse_text(cfg.to_text());
  CHECK(back.entries() == cfg.entries());
  // Section-less keys must come out section-less, not swallowed by a section.
  CHECK(back.get_string("top", "") == "1");
}

TEST_CASE("format_double is shortest-exact") {
  CHECK(nv::format_double(0.0) == "0");
  CHECK(nv::format_double(0.1) == "0.1");
  CHECK(nv::format_double(-2.5e-7) == "-2.5e-07");
  // 17 significant digits recover the exact bits.
  const double v = 0.1 + 0.2;
  CHECK(std::stod(nv::format_double(v)) == v);
}

TEST_CASE("density matrix text round trip") {
  std::mt19937 rng(31);
  std::normal_distribution<double> dist(0.0, 1.0);
  nv::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      g(i, j) = std::complex<double>(dist(rng), dist(rng));
  nv::Matrix4cd rho = g * g.adjoint();
  rho /= rho.trace().real();
  const std::string text = nv::density_matrix_to_text(rho);
  const nv::Matrix4cd back = nv::density_matrix_from_text(text);
  CHECK((back - rho).norm() == 0.0);  // %.17g is bit-exact for doubles
  CHECK_THROWS(nv::density_matrix_from_text("1 2 3\n"));
}

TEST_CASE("contour CSV layout") {
  const fs::path dir = scratch_dir();
  const std::string path = (dir / "contour.csv").string();
  Eigen::MatrixXd m(2, 3);
  m << 0.0, 0.5, 1.0, 0.25, 0.75, 1.25;
  nv::write_contour_csv(path, {0.9, 1.0}, {1e3, 2e3, 3e3}, m);
  const std::string got = nv::read_text_file(path);
  CHECK(got ==
        "polarization,1000,2000,3000\n"
        "0.9,0,0.5,1\n"
        "1,0.25,0.75,1.25\n");
}

TEST_CASE("trace CSV layout") {
  const fs::path dir = scratch_dir();
  const std::string path = (dir / "trace.csv").string();
  nv::TraceResult trace;
  trace.times = {1e-6, 2e-6};
  trace.concurrence = {0.0, 0.125};
  trace.heat_L = {1e9, 2e9};
  trace.heat_R = {-1e9, -2e9};
  nv::write_trace_csv(path, trace);
  const std::string got = nv::read_text_file(path);
  CHECK(got ==
        "t_seconds,concurrence,J_L,J_R\n"
        "1e-06,0,1000000000,-1000000000\n"
        "2e-06,0.125,2000000000,-2000000000\n");
}

TEST_CASE("trajectory CSV has a full 33-column header and exact values") {
  const fs::path dir = scratch_dir();
  const std::string path = (dir / "traj.csv").string();
  const nv::Matrix4cd rho = nv::product_thermal_state<double>(0.25, 0.5);
  nv::write_trajectory_csv(path, {0.0}, {rho});
  const std::string got = nv::read_text_file(path);
  // Header: time plus 16 complex entries split into re/im, row-major.
  CHECK(got.find("t_seconds,rho_00_re,rho_00_im,rho_01_re") == 0);
  CHECK(got.find("rho_33_im") != std::string::npos);
  const auto body = got.substr(got.find('\n') + 1);
  CHECK(body.find("0,0.375,0,0,0,") == 0);
  // One header plus one sample.
  CHECK(std::count(got.begin(), got.end(), '\n') == 2);
}

TEST_CASE("manifest embeds the resolved config and the outputs") {
  const fs::path dir = scratch_dir();
  const std::string path = (dir / "run_manifest.json").string();
  nv::Config cfg = nv::Config::parse_text("[engine]\ng = 60e3\n");
  cfg.set("run.threads", "4");
  nv::write_manifest(path, cfg, "deadbeefdeadbeef",
                     {{"concurrence.csv", "contour-csv"},
                      {"heat_L.csv", "contour-csv"}});
  const auto j = nlohmann::json::parse(nv::read_text_file(path));
  CHECK(j.at("tool") == "nveng");
  CHECK_FALSE(j.at("tool_version").get<std::string>().empty());
  CHECK(j.at("params_hash") == "deadbeefdeadbeef");
  REQUIRE(j.at("outputs").size() == 2);
  CHECK(j.at("outputs")[0].at("path") == "concurrence.csv");
  CHECK(j.at("outputs")[0].at("kind") == "contour-csv");
  CHECK(j.at("created_utc").get<std::string>().find('T') !=
        std::string::npos);
  // The embedded config text parses back to the same entries.
  const nv::Config back =
      nv::Config::parse_text(nv::manifest_embedded_config(path));
  CHECK(back.entries() == cfg.entries());
}

TEST_CASE("text file round trip and missing-file error") {
  const fs::path dir = scratch_dir();
  const std::string path = (dir / "note.txt").string();
  nv::write_text_file(path, "line1\nline2\n");
  CHECK(nv::read_text_file(path) == "line1\nline2\n");
  CHECK_THROWS(nv::read_text_file((dir / "absent.txt").string()));
}
