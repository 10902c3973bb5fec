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

#include "nv/nvphys.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nv {

void validate_geometry(const GeometryConfig& geom) {
  if (!(geom.r > 0)) throw std::invalid_argument("geometry: r must be positive");
  if (!(geom.R_min > 0) || !(geom.R_max > geom.R_min))
    throw std::invalid_argument("geometry: need 0 < R_min < R_max");
  if (geom.n_C < 0) throw std::invalid_argument("geometry: n_C must be >= 0");
  if (geom.d_sep < 0)
    throw std::invalid_argument("geometry: d_sep must be >= 0");
}

double qubit_energy(double B_par, const PhysicalConstants& c) {
  const double eps = c.D - c.gamma_e * B_par;
  if (B_par < 0 || eps < 0)
    throw std::invalid_argument(
        "qubit_energy: field outside [0, D/gamma_e); the level crossing "
        "regime is outside this model's validity");
  return eps;
}

double nuclear_energy(double B_par, const PhysicalConstants& c) {
  if (B_par < 0)
    throw std::invalid_argument("nuclear_energy: field must be nonnegative");
  return c.gamma_n * B_par;
}

double cross_relaxation_field(const PhysicalConstants& c) {
  return c.D / (c.gamma_e + c.gamma_n);
}

double dipolar_coupling(double r, double theta, const PhysicalConstants& c) {
  if (!(r > 0)) throw std::invalid_argument("dipolar_coupling: r must be > 0");
  const double prefactor =
      c.mu0_over_4pi * c.gamma_e * c.gamma_e * planck_h(c);  // [Hz m^3]
  const double ct = std::cos(theta);
  return prefactor / (r * r * r) * (1.0 - 3.0 * ct * ct) / 4.0;
}

WindowVerdict coupling_window_check(double g, double eps, double gamma_cr,
                                    double margin) {
  if (!(g > 0) || !(eps > 0) || !(gamma_cr > 0) || !(margin > 0))
    throw std::invalid_argument("coupling_window_check: inputs must be positive");
  WindowVerdict v;
  v.g = g;
  v.gamma_cr = gamma_cr;
  v.eps = eps;
  v.margin = margin;
  std::ostringstream msg;
  msg << std::setprecision(6);
  if (g < gamma_cr) {
    v.pass = false;
    v.broke = WindowVerdict::Broke::lower;
    msg << "fail: Gamma_cr <= g broken (g = " << g
        << " Hz < Gamma_cr = " << gamma_cr << " Hz)";
  } else if (g > eps / margin) {
    v.pass = false;
    v.broke = WindowVerdict::Broke::upper;
    msg << "fail: g << eps broken (g = " << g << " Hz > eps/margin = "
        << eps / margin << " Hz, margin " << margin << ")";
  } else {
    v.pass = true;
    v.broke = WindowVerdict::Broke::none;
    msg << "pass: " << gamma_cr << " Hz <= g = " << g
        << " Hz <= eps/margin = " << eps / margin << " Hz";
  }
  v.message = msg.str();
  return v;
}

double b_rms_squared(const GeometryConfig& geom, const PhysicalConstants& c) {
  if (!(geom.R_min > 0))
    throw std::invalid_argument("b_rms_squared: R_min must be positive");
  if (geom.n_C < 0)
    throw std::invalid_argument("b_rms_squared: n_C must be nonnegative");
  constexpr double spin_factor = 0.25;  // <S_z^2> of a spin-1/2 bath
  const double moment = c.mu0_over_4pi * c.gamma_n * planck_h(c);  // [T m^3]
  const double rmin3 = geom.R_min * geom.R_min * geom.R_min;
  constexpr double pi = two_pi / 2;
  return spin_factor * moment * moment * (7.0 * pi / (2.0 * rmin3)) * geom.n_C;
}

double spectral_density(double eps, double eps_n, double gamma2) {
  if (!(gamma2 > 0))
    throw std::invalid_argument("spectral_density: Gamma_2 must be positive");
  const double x = (eps - eps_n) / gamma2;
  return (1.0 / gamma2) / (1.0 + x * x);
}

double cross_relaxation_rate_microscopic(const GeometryConfig& geom,
                                         double gamma2,
                                         const PhysicalConstants& c) {
  if (!(gamma2 > 0))
    throw std::invalid_argument(
        "cross_relaxation_rate_microscopic: Gamma_2 must be positive");
  return 3.0 * c.gamma_e * c.gamma_e * b_rms_squared(geom, c) / gamma2;
}

double gamma1_scaled(double abundance_pct) {
  if (abundance_pct < 0)
    throw std::invalid_argument("gamma1_scaled: abundance must be >= 0");
  return abundance_pct / 1.1 * 250e3;
}

double gamma2_scaled(double abundance_pct) {
  if (abundance_pct < 0)
    throw std::invalid_argument("gamma2_scaled: abundance must be >= 0");
  return abundance_pct / 1.1 * 1.5e3;
}

double polarization_from_temperature(double eps_n, double T, TempUnit unit,
                                     const PhysicalConstants& c) {
  if (T == 0) return 1.0;  // zero-temperature limit, taken exactly
  const double kT_hz = unit == TempUnit::kelvin ? c.kB_over_h * T : T;
  return std::tanh(eps_n / (2.0 * kT_hz));
}

double occupation_from_polarization(double p) {
  if (p < -1 || p > 1)
    throw std::invalid_argument(
        "occupation_from_polarization: polarization must be in [-1, 1]");
  return (1.0 - p) / 2.0;
}

double diffusion_constant(double abundance_pct) {
  if (abundance_pct < 0 || abundance_pct > 100)
    throw std::invalid_argument(
        "diffusion_constant: abundance must be in [0, 100] percent");
  return std::sqrt(abundance_pct / 100.0) * 6.5;
}

double diffusion_time(double d_nm, double D_nm2_per_s) {
  if (D_nm2_per_s < 0)
    throw std::invalid_argument("diffusion_time: D must be nonnegative");
  if (D_nm2_per_s == 0)
    return std::numeric_limits<double>::infinity();  // "no diffusion" verdict
  return d_nm * d_nm / D_nm2_per_s;
}

double influence_spin_count(const GeometryConfig& geom) {
  validate_geometry(geom);
  constexpr double pi = two_pi / 2;
  const double shell = geom.R_max * geom.R_max * geom.R_max -
                       geom.R_min * geom.R_min * geom.R_min;
  return geom.n_C * (4.0 * pi / 3.0) * shell;
}

double abundance_to_density(double abundance_pct) {
  if (abundance_pct < 0)
    throw std::invalid_argument("abundance_to_density: abundance must be >= 0");
  return abundance_pct / 1.1 * 1.9e27;  // anchor: 1.1% <-> 1.9 nm^-3
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

const std::vector<NucleusRecord>& builtin_registry() {
  // ">99 %" polarization is encoded as the conservative bound 0.99; purely
  // qualitative cells ("few percent", "few 1000", ranges) are nulls.
  static const std::vector<NucleusRecord> table = [] {
    std::vector<NucleusRecord> t;
    NucleusRecord c13_nat;
    c13_nat.name = "13C-natural";
    c13_nat.gamma_n = 10.7e6;
    c13_nat.concentration = 0.011;
    c13_nat.concentration_unit = ConcentrationUnit::fraction;
    c13_nat.qubit_energy = 1.1e6;
    c13_nat.bare_rate_ref = 250e3;
    c13_nat.decoherence_ref = 1.5e3;
    c13_nat.diffusion_const_ref = 7.0;
    c13_nat.polarization_rate = 9000;
    c13_nat.max_polarization = 0.99;
    c13_nat.spin_lattice_rate = 150;
    t.push_back(c13_nat);

    NucleusRecord c13_enr;
    c13_enr.name = "13C-enriched";
    c13_enr.gamma_n = 10.7e6;
    c13_enr.concentration = std::nullopt;  // a 3-100% range, not one number
    c13_enr.concentration_unit = ConcentrationUnit::fraction;
    c13_enr.qubit_energy = 1.1e6;
    c13_enr.bare_rate_ref = std::nullopt;   // use gamma1_scaled(abundance)
    c13_enr.decoherence_ref = std::nullopt; // use gamma2_scaled(abundance)
    c13_enr.diffusion_const_ref = std::nullopt;  // use diffusion_constant
    c13_enr.polarization_rate = 9000;
    c13_enr.max_polarization = 0.99;
    c13_enr.spin_lattice_rate = 150;
    t.push_back(c13_enr);

    NucleusRecord h1_biphenyl;
    h1_biphenyl.name = "1H-biphenyl";
    h1_biphenyl.gamma_n = 42.6e6;
    h1_biphenyl.concentration = 41.0;
    h1_biphenyl.concentration_unit = ConcentrationUnit::per_nm3;
    h1_biphenyl.qubit_energy = 4.4e6;
    h1_biphenyl.bare_rate_ref = std::nullopt;
    h1_biphenyl.decoherence_ref = std::nullopt;
    h1_biphenyl.diffusion_const_ref = 571.0;
    h1_biphenyl.polarization_rate = 7500;
    h1_biphenyl.max_polarization = std::nullopt;
    h1_biphenyl.spin_lattice_rate = 150;
    t.push_back(h1_biphenyl);

    NucleusRecord h1_al2o3;
    h1_al2o3.name = "1H-Al2O3";
    h1_al2o3.gamma_n = 42.6e6;
    h1_al2o3.concentration = std::nullopt;  // only a ">> 3 nm^-2" bound
    h1_al2o3.concentration_unit = ConcentrationUnit::per_nm2;
    h1_al2o3.qubit_energy = 4.4e6;
    h1_al2o3.bare_rate_ref = std::nullopt;
    h1_al2o3.decoherence_ref = std::nullopt;
    h1_al2o3.diffusion_const_ref = 700.0;
    h1_al2o3.polarization_rate = 375;
    h1_al2o3.max_polarization = std::nullopt;
    h1_al2o3.spin_lattice_rate = 150;
    t.push_back(h1_al2o3);

    NucleusRecord f19;
    f19.name = "19F-Al2O3";
    f19.gamma_n = 40.0e6;
    f19.concentration = 3.0;
    f19.concentration_unit = ConcentrationUnit::per_nm2;
    f19.qubit_energy = 4.1e6;
    f19.bare_rate_ref = std::nullopt;
    f19.decoherence_ref = std::nullopt;
    f19.diffusion_const_ref = 700.0;
    f19.polarization_rate = 154;
    f19.max_polarization = 0.003;
    f19.spin_lattice_rate = 150;
    t.push_back(f19);
    return t;
  }();
  return table;
}

namespace {

const char* unit_token(ConcentrationUnit u) {
  switch (u) {
    case ConcentrationUnit::fraction: return "fraction";
    case ConcentrationUnit::per_nm3: return "per_nm3";
    case ConcentrationUnit::per_nm2: return "per_nm2";
  }
  return "fraction";
}

ConcentrationUnit parse_unit_token(const std::string& tok, int line) {
  if (tok == "fraction") return ConcentrationUnit::fraction;
  if (tok == "per_nm3") return ConcentrationUnit::per_nm3;
  if (tok == "per_nm2") return ConcentrationUnit::per_nm2;
  throw std::runtime_error("registry line " + std::to_string(line) +
                           ", field 'concentration': unknown unit tag '" +
                           tok + "'");
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "null";
  // Shortest decimal that parses back exactly; keeps the table readable
  // ("0.011", not "0.0109999...") without losing a bit.
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, *v);
    if (std::strtod(buf, nullptr) == *v) break;
  }
  return buf;
}

std::optional<double> parse_cell(const std::string& tok,
                                 const std::string& field, int line) {
  if (tok == "null") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("registry line " + std::to_string(line) +
                             ", field '" + field + "': cannot parse '" + tok +
                             "' as a number");
  }
}

void validate_record(const NucleusRecord& rec, int line) {
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("registry line " + std::to_string(line) +
                             " (record '" + rec.name + "'): " + why);
  };
  if (!(rec.gamma_n > 0)) fail("gamma_n must be positive");
  for (const auto& [value, name] :
       {std::pair{rec.bare_rate_ref, "bare_rate_ref"},
        std::pair{rec.decoherence_ref, "decoherence_ref"},
        std::pair{rec.polarization_rate, "polarization_rate"},
        std::pair{rec.spin_lattice_rate, "spin_lattice_rate"},
        std::pair{rec.diffusion_const_ref, "diffusion_const_ref"}}) {
    if (value && *value < 0) fail(std::string(name) + " must be nonnegative");
  }
  if (rec.max_polarization &&
      (*rec.max_polarization < 0 || *rec.max_polarization > 1))
    fail("max_polarization must lie in [0,1]");
}

}  // namespace

std::string registry_to_text(const std::vector<NucleusRecord>& records) {
  std::ostringstream os;
  os << "# " << kRegistryFormatVersion << "\n";
  os << "# fields: name gamma_n[Hz/T] concentration[value:unit] "
        "qubit_energy[Hz] bare_rate_ref[Hz] decoherence_ref[Hz] "
        "diffusion_const_ref[nm^2/s] polarization_rate[Hz] "
        "max_polarization[1] spin_lattice_rate[Hz]\n";
  os << "# 'null' marks cells absent from the source data; unit tags: "
        "fraction, per_nm3, per_nm2\n";
  for (const auto& r : records) {
    os << r.name << ' ' << cell(r.gamma_n) << ' ' << cell(r.concentration)
       << ':' << unit_token(r.concentration_unit) << ' '
       << cell(r.qubit_energy) << ' ' << cell(r.bare_rate_ref) << ' '
       << cell(r.decoherence_ref) << ' ' << cell(r.diffusion_const_ref) << ' '
       << cell(r.polarization_rate) << ' ' << cell(r.max_polarization) << ' '
       << cell(r.spin_lattice_rate) << "\n";
  }
  return os.str();
}

std::vector<NucleusRecord> parse_registry(std::istream& in) {
  std::vector<NucleusRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.size() != 10)
      throw std::runtime_error("registry line " + std::to_string(lineno) +
                               ": expected 10 fields, found " +
                               std::to_string(tok.size()));
    NucleusRecord rec;
    rec.name = tok[0];
    const auto gn = parse_cell(tok[1], "gamma_n", lineno);
    if (!gn)
      throw std::runtime_error("registry line " + std::to_string(lineno) +
                               ", field 'gamma_n': null not allowed");
    rec.gamma_n = *gn;
    const auto colon = tok[2].rfind(':');
    if (colon == std::string::npos)
      throw std::runtime_error("registry line " + std::to_string(lineno) +
                               ", field 'concentration': expected value:unit");
    rec.concentration =
        parse_cell(tok[2].substr(0, colon), "concentration", lineno);
    rec.concentration_unit = parse_unit_token(tok[2].substr(colon + 1), lineno);
    rec.qubit_energy = parse_cell(tok[3], "qubit_energy", lineno);
    rec.bare_rate_ref = parse_cell(tok[4], "bare_rate_ref", lineno);
    rec.decoherence_ref = parse_cell(tok[5], "decoherence_ref", lineno);
    rec.diffusion_const_ref = parse_cell(tok[6], "diffusion_const_ref", lineno);
    rec.polarization_rate = parse_cell(tok[7], "polarization_rate", lineno);
    rec.max_polarization = parse_cell(tok[8], "max_polarization", lineno);
    rec.spin_lattice_rate = parse_cell(tok[9], "spin_lattice_rate", lineno);
    validate_record(rec, lineno);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<NucleusRecord> load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open registry file: " + path);
  return parse_registry(in);
}

std::string consistency_report(const GeometryConfig& geom,
                               const PhysicalConstants& c) {
  std::ostringstream os;
  os << std::setprecision(6);
  const double anchor = gamma1_scaled(1.1);
  const double micro = cross_relaxation_rate_microscopic(geom, 1.5e3, c);
  const double ratio = micro / anchor;
  os << (ratio > 3 || ratio < 1.0 / 3 ? "FLAG" : "OK  ")
     << " microscopic cross-relaxation rate " << micro
     << " Hz vs operational anchor " << anchor << " Hz (ratio " << ratio
     << "); the engine always consumes the anchored rate\n";
  const double d_eq = diffusion_constant(1.1);
  os << (std::abs(d_eq - 6.5) / 6.5 > 0.1 ? "FLAG" : "OK  ")
     << " sqrt-scaling diffusion constant at natural abundance " << d_eq
     << " nm^2/s vs the quoted full-enrichment value 6.5 nm^2/s (the source "
        "also cites a measured 7 nm^2/s)\n";
  const auto& reg = builtin_registry();
  const auto& nat = reg.front();
  const bool anchors_ok = nat.qubit_energy && *nat.qubit_energy == 1.1e6 &&
                          nat.bare_rate_ref && *nat.bare_rate_ref == 250e3 &&
                          nat.decoherence_ref && *nat.decoherence_ref == 1.5e3;
  os << (anchors_ok ? "OK  " : "FLAG")
     << " registry anchors for natural-abundance carbon-13 "
     << (anchors_ok ? "match" : "DO NOT match")
     << " (qubit energy 1.1 MHz, rates 250 kHz / 1.5 kHz)\n";
  return os.str();
}

}  // namespace nv
