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

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nv/constants.hpp"
#include "nv/nvphys.hpp"

// Golden values below were frozen from an independent reference implementation
// of the same formulas (same IEEE doubles, different code path); they pin the
// arithmetic, not just the shape of each expression.

namespace {
const nv::PhysicalConstants kC = nv::nv_carbon13_constants();
}

TEST_CASE("physical constants") {
  CHECK(kC.D == 2.87e9);
  CHECK(kC.gamma_e == 28.0e9);
  CHECK(kC.gamma_n == 10.7e6);
  CHECK(kC.mu0_over_4pi == 1e-7);
  CHECK(kC.kB_over_h ==
        doctest::Approx(20836619123.327576).epsilon(1e-14));
  CHECK(nv::planck_h(kC) ==
        doctest::Approx(nv::two_pi * kC.hbar).epsilon(1e-15));
}

TEST_CASE("qubit energy is the lower branch D - gamma_e B") {
  CHECK(nv::qubit_energy(0.0, kC) == kC.D);
  CHECK(nv::qubit_energy(0.1, kC) == doctest::Approx(7e7).epsilon(1e-12));
  // Past the level crossing the model does not apply.
  CHECK_THROWS_AS(nv::qubit_energy(0.11, kC), std::invalid_argument);
}

TEST_CASE("cross-relaxation resonance field and energy") {
  const double b_cr = nv::cross_relaxation_field(kC);
  CHECK(b_cr == doctest::Approx(0.1024608453198242).epsilon(1e-14));
  CHECK(b_cr > 0.101);
  CHECK(b_cr < 0.103);
  const double eps = nv::qubit_energy(b_cr, kC);
  CHECK(eps == doctest::Approx(1.0963310449223518e6).epsilon(1e-12));
  // At the resonance, electronic and nuclear transition energies coincide.
  CHECK(nv::nuclear_energy(b_cr, kC) == doctest::Approx(eps).epsilon(1e-12));
}

TEST_CASE("dipolar coupling: magnitude, sign, magic angle") {
  // Axis-aligned pair at 10 nm: (1 - 3cos^2) = -2, so the flip-flop piece is
  // negative; engine callers take the magnitude.
  const double g0 = nv::dipolar_coupling(10e-9, 0.0, kC);
  CHECK(g0 == doctest::Approx(-25974.19497208511).epsilon(1e-12));
  const double g90 = nv::dipolar_coupling(10e-9, nv::two_pi / 4.0, kC);
  CHECK(g90 == doctest::Approx(12987.097486042555).epsilon(1e-10));
  const double magic = std::acos(1.0 / std::sqrt(3.0));
  CHECK(std::abs(nv::dipolar_coupling(10e-9, magic, kC)) < 1e-9);
  // 1/r^3: halving the distance is an eightfold gain.
  CHECK(nv::dipolar_coupling(5e-9, 0.0, kC) ==
        doctest::Approx(8.0 * g0).epsilon(1e-12));
  CHECK_THROWS_AS(nv::dipolar_coupling(0.0, 0.0, kC), std::invalid_argument);
}

TEST_CASE("coupling window verdict ordering") {
  const auto pass = nv::coupling_window_check(5e4, 1.1e6, 1e4, 10.0);
  CHECK(pass.pass);
  CHECK(pass.broke == nv::WindowVerdict::Broke::none);
  CHECK(pass.message.find("pass") == 0);

  const auto lower = nv::coupling_window_check(5e3, 1.1e6, 1e4, 10.0);
  CHECK_FALSE(lower.pass);
  CHECK(lower.broke == nv::WindowVerdict::Broke::lower);

  const auto upper = nv::coupling_window_check(2e5, 1.1e6, 1e4, 10.0);
  CHECK_FALSE(upper.pass);
  CHECK(upper.broke == nv::WindowVerdict::Broke::upper);

  // When both inequalities fail, the lower one is reported (checked first).
  const auto both = nv::coupling_window_check(5e3, 1e4, 1e4, 10.0);
  CHECK_FALSE(both.pass);
  CHECK(both.broke == nv::WindowVerdict::Broke::lower);

  // Tighter margin flips a pass into an upper break.
  const auto tight = nv::coupling_window_check(5e4, 1.1e6, 1e4, 100.0);
  CHECK_FALSE(tight.pass);
  CHECK(tight.broke == nv::WindowVerdict::Broke::upper);

  CHECK_THROWS_AS(nv::coupling_window_check(0.0, 1.1e6, 1e4, 10.0),
                  std::invalid_argument);
}

TEST_CASE("nuclear bath rms field") {
  nv::GeometryConfig geom;  // defaults: R_min 0.2 nm, R_max 1.33 nm, 1.9 nm^-3
  const double b2 = nv::b_rms_squared(geom, kC);
  CHECK(b2 ==
        doctest::Approx(3.2817172008773406e-10).epsilon(1e-12).scale(0.0));
  // Density-linear: doubling n_C doubles b_rms^2.
  geom.n_C *= 2.0;
  CHECK(nv::b_rms_squared(geom, kC) ==
        doctest::Approx(2.0 * b2).epsilon(1e-12).scale(0.0));
}

TEST_CASE("Lorentzian spectral density") {
  const double g2 = 1.5e3;
  CHECK(nv::spectral_density(1.1e6, 1.1e6, g2) ==
        doctest::Approx(1.0 / g2).epsilon(1e-14));
  CHECK(nv::spectral_density(1.1e6 + g2, 1.1e6, g2) ==
        doctest::Approx(0.5 / g2).epsilon(1e-14));
  CHECK(nv::spectral_density(1.1e6, 1.1e6 + 100.0 * g2, g2) <
        1e-4 / g2 * 1.01);
}

TEST_CASE("microscopic rate estimator vs anchored rate") {
  nv::GeometryConfig geom;
  const double micro =
      nv::cross_relaxation_rate_microscopic(geom, nv::gamma2_scaled(1.1), kC);
  CHECK(micro == doctest::Approx(5.145732570975670e8).epsilon(1e-10));
  // The estimator famously overshoots the anchored value by >3 orders of
  // magnitude; the consistency report must say so rather than hide it.
  CHECK(micro / nv::gamma1_scaled(1.1) > 1e3);
  const std::string report = nv::consistency_report(geom, kC);
  CHECK(report.find("FLAG") != std::string::npos);
  CHECK(report.find("OK") != std::string::npos);
}

TEST_CASE("anchored rates are linear in abundance and exact at 1.1%") {
  CHECK(nv::gamma1_scaled(1.1) == 250e3);
  CHECK(nv::gamma2_scaled(1.1) == 1.5e3);
  CHECK(nv::gamma1_scaled(2.2) == doctest::Approx(500e3).epsilon(1e-14));
  CHECK(nv::gamma1_scaled(100.0) ==
        doctest::Approx(250e3 * 100.0 / 1.1).epsilon(1e-14));
  CHECK_THROWS_AS(nv::gamma1_scaled(-1.0), std::invalid_argument);
}

TEST_CASE("thermal polarization") {
  const double p300 = nv::polarization_from_temperature(
      1.1e6, 300.0, nv::TempUnit::kelvin, kC);
  CHECK(p300 ==
        doctest::Approx(8.798612301171382e-08).epsilon(1e-12).scale(0.0));
  CHECK(p300 > 5e-8);
  CHECK(p300 < 2e-7);
  // Frequency-unit temperature: p = tanh(eps / 2T).
  const double p_hot = nv::polarization_from_temperature(
      1.1e6, 1e9, nv::TempUnit::hertz, kC);
  CHECK(p_hot == doctest::Approx(std::tanh(1.1e6 / 2e9)).epsilon(1e-14));
  // T = 0 is the fully polarized limit, exactly.
  CHECK(nv::polarization_from_temperature(1.1e6, 0.0, nv::TempUnit::kelvin,
                                          kC) == 1.0);
  // Negative temperature gives population inversion, p < 0.
  CHECK(nv::polarization_from_temperature(1.1e6, -300.0, nv::TempUnit::kelvin,
                                          kC) < 0.0);
}

TEST_CASE("occupation from polarization") {
  CHECK(nv::occupation_from_polarization(1.0) == 0.0);
  CHECK(nv::occupation_from_polarization(0.0) == 0.5);
  CHECK(nv::occupation_from_polarization(-1.0) == 1.0);
  const double p_hot = nv::polarization_from_temperature(
      1.1e6, 1e9, nv::TempUnit::hertz, kC);
  CHECK(nv::occupation_from_polarization(p_hot) ==
        doctest::Approx(0.49972500002772924).epsilon(1e-14));
}

TEST_CASE("spin diffusion") {
  CHECK(nv::diffusion_constant(100.0) == 6.5);
  CHECK(nv::diffusion_constant(1.1) ==
        doctest::Approx(0.6817257513105985).epsilon(1e-13));
  CHECK(nv::diffusion_time(20.0, 6.5) ==
        doctest::Approx(61.53846153846154).epsilon(1e-14));
  CHECK(nv::diffusion_time(20.0, 6.5) > 55.0);
  CHECK(nv::diffusion_time(20.0, 6.5) < 70.0);
  // Natural abundance by the square-root law: ~10 minutes, not ~1.
  CHECK(nv::diffusion_time(20.0, nv::diffusion_constant(1.1)) ==
        doctest::Approx(586.7462087665183).epsilon(1e-10));
  // No diffusion: infinite timescale, not an error.
  CHECK(nv::diffusion_time(20.0, 0.0) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("influence shell spin count") {
  nv::GeometryConfig geom;
  CHECK(nv::influence_spin_count(geom) ==
        doctest::Approx(18.660265748821523).epsilon(1e-13));
}

TEST_CASE("abundance to density anchor") {
  CHECK(nv::abundance_to_density(1.1) == 1.9e27);
  CHECK(nv::abundance_to_density(2.2) == doctest::Approx(3.8e27).epsilon(1e-14));
}

TEST_CASE("geometry validation") {
  nv::GeometryConfig geom;
  CHECK_NOTHROW(nv::validate_geometry(geom));
  geom.r = 0.0;
  CHECK_THROWS_AS(nv::validate_geometry(geom), std::invalid_argument);
  geom = nv::GeometryConfig{};
  geom.R_min = geom.R_max;
  CHECK_THROWS_AS(nv::validate_geometry(geom), std::invalid_argument);
  geom = nv::GeometryConfig{};
  geom.n_C = -1.0;
  CHECK_THROWS_AS(nv::validate_geometry(geom), std::invalid_argument);
}

TEST_CASE("builtin registry shape and anchor cells") {
  const auto& reg = nv::builtin_registry();
  REQUIRE(reg.size() == 5);
  const auto& c13 = reg[0];
  CHECK(c13.name == "13C-natural");
  CHECK(c13.gamma_n == 10.7e6);
  REQUIRE(c13.concentration.has_value());
  CHECK(*c13.concentration == 0.011);
  CHECK(c13.concentration_unit == nv::ConcentrationUnit::fraction);
  CHECK(*c13.qubit_energy == 1.1e6);
  CHECK(*c13.bare_rate_ref == 250e3);
  CHECK(*c13.decoherence_ref == 1.5e3);
  CHECK(*c13.diffusion_const_ref == 7.0);
  CHECK(*c13.polarization_rate == 9000.0);
  CHECK(*c13.max_polarization == 0.99);
  CHECK(*c13.spin_lattice_rate == 150.0);

  // Enriched carbon: rates come from the scaling laws, so the cells are null.
  const auto& enriched = reg[1];
  CHECK_FALSE(enriched.bare_rate_ref.has_value());
  CHECK_FALSE(enriched.decoherence_ref.has_value());

  const auto& h_biphenyl = reg[2];
  CHECK(h_biphenyl.gamma_n == 42.6e6);
  CHECK(h_biphenyl.concentration_unit == nv::ConcentrationUnit::per_nm3);
  CHECK(*h_biphenyl.concentration == 41.0);
  CHECK(*h_biphenyl.polarization_rate == 7500.0);
  CHECK(*h_biphenyl.diffusion_const_ref == 571.0);

  // Surface hydrogen: the sheet density is only bounded below in the source
  // data, so the cell is null.
  const auto& h_surface = reg[3];
  CHECK(h_surface.concentration_unit == nv::ConcentrationUnit::per_nm2);
  CHECK_FALSE(h_surface.concentration.has_value());
  CHECK(*h_surface.polarization_rate == 375.0);

  const auto& f_surface = reg[4];
  CHECK(f_surface.gamma_n == 40.0e6);
  CHECK(*f_surface.concentration == 3.0);
  CHECK(*f_surface.qubit_energy == 4.1e6);
  CHECK(*f_surface.polarization_rate == 154.0);
  CHECK(*f_surface.max_polarization == 0.003);
  // Spin-lattice relaxation is common to every platform in the table.
  for (const auto& rec : reg) CHECK(*rec.spin_lattice_rate == 150.0);
}

TEST_CASE("registry text round trip") {
  const auto& reg = nv::builtin_registry();
  const std::string text = nv::registry_to_text(reg);
  CHECK(text.find(nv::kRegistryFormatVersion) != std::string::npos);
  std::istringstream in(text);
  const auto parsed = nv::parse_registry(in);
  REQUIRE(parsed.size() == reg.size());
  for (std::size_t i = 0; i < reg.size(); ++i) {
    CHECK(parsed[i].name == reg[i].name);
    CHECK(parsed[i].gamma_n == reg[i].gamma_n);
    CHECK(parsed[i].concentration == reg[i].concentration);
    CHECK(parsed[i].concentration_unit == reg[i].concentration_unit);
    CHECK(parsed[i].qubit_energy == reg[i].qubit_energy);
    CHECK(parsed[i].bare_rate_ref == reg[i].bare_rate_ref);
    CHECK(parsed[i].decoherence_ref == reg[i].decoherence_ref);
    CHECK(parsed[i].diffusion_const_ref == reg[i].diffusion_const_ref);
    CHECK(parsed[i].polarization_rate == reg[i].polarization_rate);
    CHECK(parsed[i].max_polarization == reg[i].max_polarization);
    CHECK(parsed[i].spin_lattice_rate == reg[i].spin_lattice_rate);
  }
}

TEST_CASE("registry parse errors carry line and field") {
  {
    std::istringstream in("species 1.0\n");  // too few fields
    try {
      nv::parse_registry(in);
      FAIL("expected parse error");
    } catch (const std::exception& e) {
      const std::string msg = e.what();
      CHECK(msg.find("line 1") != std::string::npos);
    }
  }
  {
    // Field 2 (gamma_n) is not a number.
    std::istringstream in(
        "bad-species oops 0.011:fraction null null null null null null "
        "null\n");
    try {
      nv::parse_registry(in);
      FAIL("expected parse error");
    } catch (const std::exception& e) {
      const std::string msg = e.what();
      CHECK(msg.find("gamma_n") != std::string::npos);
    }
  }
  {
    // Unknown concentration unit.
    std::istringstream in(
        "bad-species 1e6 0.011:bushels null null null null null null null\n");
    CHECK_THROWS(nv::parse_registry(in));
  }
}
