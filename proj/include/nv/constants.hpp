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

#ifndef NV_CONSTANTS_HPP
#define NV_CONSTANTS_HPP

namespace nv {

// Everything in this codebase lives in a single units convention:
//
//   * all energies, temperatures and rates are ordinary frequencies in Hz;
//   * literature values quoted as angular frequencies (the zero-field
//     splitting, gyromagnetic ratios) are divided by 2*pi once, here, at the
//     constants boundary and never again;
//   * the generator mixes coherent and dissipative pieces 1:1 in these units,
//     so a time "t" is measured in 1/Hz.  A uniform 2*pi rescaling of every
//     frequency (with t -> t/2*pi) leaves steady states, concurrence, rate
//     ratios and optimal couplings unchanged; only absolute time labels move.
//
// Keeping one convention kills the classic factor-2*pi bug family at the cost
// of a single documented choice.
struct PhysicalConstants {
  double D;             // NV zero-field splitting [Hz]
  double gamma_e;       // electron gyromagnetic ratio [Hz/T]
  double gamma_n;       // nuclear gyromagnetic ratio of the bath species [Hz/T]
  double mu0_over_4pi;  // magnetic constant / 4 pi [T*m/A]
  double hbar;          // reduced Planck constant [J*s]
  double kB_over_h;     // Boltzmann / Planck [Hz/K]
};

inline constexpr double two_pi = 6.283185307179586476925286766559;

// h = 2*pi*hbar; used wherever a magnetic moment gamma*h enters (dipolar
// couplings, rms field of the nuclear bath).
constexpr double planck_h(const PhysicalConstants& c) { return two_pi * c.hbar; }

// Defaults for an NV center in a carbon-13 bath.  D and gamma_e are the
// angular-frequency literature values already converted to ordinary
// frequency; kB/h is the exact-SI ratio.
constexpr PhysicalConstants nv_carbon13_constants() {
  return PhysicalConstants{
      /*D=*/2.87e9,
      /*gamma_e=*/28.0e9,
      /*gamma_n=*/10.7e6,
      /*mu0_over_4pi=*/1e-7,
      /*hbar=*/1.054571817e-34,
      /*kB_over_h=*/1.380649e-23 / 6.62607015e-34,
  };
}

}  // namespace nv

#endif  // NV_CONSTANTS_HPP
