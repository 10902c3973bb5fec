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

#ifndef NV_ENTANGLEMENT_HPP
#define NV_ENTANGLEMENT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "nv/lindblad.hpp"
#include "nv/linalg.hpp"

namespace nv {

enum class ConcurrenceBranch { inner, outer, separable };
enum class ConcurrenceMethod { general_eigenvalue, x_closed_form };

struct ConcurrenceResult {
  double value = 0;  // Wootters concurrence in [0,1]
  ConcurrenceBranch branch = ConcurrenceBranch::separable;
  ConcurrenceMethod method = ConcurrenceMethod::general_eigenvalue;
  // Square-rooted spectrum of rho*rho_tilde in decreasing order (general
  // method only); handy when debugging near-separable states.
  std::array<double, 4> lambdas{};
};

namespace detail {

// Branch classification reuses the X-state scores; for genuinely non-X input
// it is a best-effort label (the value itself is exact either way).
template <typename Real>
ConcurrenceBranch classify_branch(const Matrix4c<Real>& rho, double value) {
  if (value <= 0) return ConcurrenceBranch::separable;
  const double inner =
      std::abs(rho(1, 2)) -
      std::sqrt(std::max(0.0, static_cast<double>(rho(0, 0).real()) *
                                  static_cast<double>(rho(3, 3).real())));
  const double outer =
      std::abs(rho(0, 3)) -
      std::sqrt(std::max(0.0, static_cast<double>(rho(1, 1).real()) *
                                  static_cast<double>(rho(2, 2).real())));
  return inner >= outer ? ConcurrenceBranch::inner : ConcurrenceBranch::outer;
}

template <typename Real>
Matrix4c<Real> matrix_sqrt_psd(const Matrix4c<Real>& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4c<Real>> es(m);
  Eigen::Matrix<Real, 4, 1> w = es.eigenvalues().cwiseMax(Real(0));
  return es.eigenvectors() * w.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace detail

// Wootters concurrence, C = max(0, l1 - l2 - l3 - l4), where l_i are the
// decreasing square roots of the eigenvalues of rho * rho_tilde with
// rho_tilde = (sy (x) sy) rho^* (sy (x) sy).
//
// The product rho*rho_tilde is not Hermitian, and feeding it to a general
// eigensolver invites spurious small imaginary parts exactly where the
// concurrence is decided.  We instead diagonalize the Hermitian congruence
// sqrt(rho) rho_tilde sqrt(rho), which shares its spectrum with the product
// and is guaranteed real nonnegative in floating point.
template <typename Real>
ConcurrenceResult concurrence_general(const Matrix4c<Real>& rho) {
  Matrix2c<Real> sy = Matrix2c<Real>::Zero();
  sy(0, 1) = Complex<Real>(0, -1);
  sy(1, 0) = Complex<Real>(0, 1);
  const Matrix4c<Real> yy = kron(sy, sy);
  const Matrix4c<Real> rho_h = hermitize(rho);
  const Matrix4c<Real> rho_tilde = yy * rho_h.conjugate() * yy;
  const Matrix4c<Real> sq = detail::matrix_sqrt_psd<Real>(rho_h);
  const Matrix4c<Real> m = hermitize<Real>(sq * rho_tilde * sq);
  Eigen::SelfAdjointEigenSolver<Matrix4c<Real>> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(
        "concurrence_general: eigensolver failed to converge");
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i)
    lam[static_cast<std::size_t>(i)] = std::sqrt(
        std::max(0.0, static_cast<double>(es.eigenvalues()(i))));
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  ConcurrenceResult res;
  res.method = ConcurrenceMethod::general_eigenvalue;
  res.lambdas = lam;
  res.value = std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
  res.branch = detail::classify_branch<Real>(rho_h, res.value);
  return res;
}

// Closed form for X-shaped states:
//   C = 2 max(0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33)).
// Rejects input whose off-X residual exceeds 1e-8; the general method exists
// precisely for such states.
template <typename Real>
ConcurrenceResult concurrence_x(const Matrix4c<Real>& rho) {
  const XComponents xc = x_state_components(rho);
  if (xc.off_x_residual > 1e-8)
    throw std::invalid_argument(
        "concurrence_x: state is not X-shaped within 1e-8 (off-X residual " +
        std::to_string(xc.off_x_residual) + ")");
  const double inner =
      std::abs(xc.inner) -
      std::sqrt(std::max(0.0, xc.populations[0] * xc.populations[3]));
  const double outer =
      std::abs(xc.outer) -
      std::sqrt(std::max(0.0, xc.populations[1] * xc.populations[2]));
  ConcurrenceResult res;
  res.method = ConcurrenceMethod::x_closed_form;
  res.value = 2.0 * std::max({0.0, inner, outer});
  if (res.value <= 0)
    res.branch = ConcurrenceBranch::separable;
  else
    res.branch = inner >= outer ? ConcurrenceBranch::inner
                                : ConcurrenceBranch::outer;
  return res;
}

enum class Side { L, R };

// Heat current J_side = Tr(H_S * D_side[rho]) carried by one bath's dissipator
// pair.  Sign convention: positive means energy flows from that bath INTO the
// system.  Units are Hz^2 — one Hz from the Hamiltonian, one from the rate —
// and at a steady state J_L + J_R = 0 because Tr(H [H, rho]) vanishes.
template <typename Real>
Real heat_current(const EngineParams& p, const Matrix4c<Real>& rho, Side side,
                  Real zz = Real(0)) {
  validate_engine_params(p);
  const Matrix4c<Real> h = build_hamiltonian<Real>(p, zz);
  const Matrix4c<Real> up =
      side == Side::L ? jump_up_L<Real>() : jump_up_R<Real>();
  const Real gamma = side == Side::L ? Real(p.Gamma_L) : Real(p.Gamma_R);
  const Real n = side == Side::L ? Real(p.n_L) : Real(p.n_R);
  auto dissip = [](const Matrix4c<Real>& a, const Matrix4c<Real>& r) {
    const Matrix4c<Real> ada = a.adjoint() * a;
    return (a * r * a.adjoint() - Real(0.5) * (ada * r + r * ada)).eval();
  };
  const Matrix4c<Real> d = gamma * n * dissip(up, rho) +
                           gamma * (Real(1) - n) * dissip(up.adjoint().eval(), rho);
  return (h * d).trace().real();
}

// Hz^2 -> attojoule/second.  Frequencies act as angular rates in the evolution
// (see constants.hpp), so one quantum of energy per Hz is hbar and one event
// per Hz is 1/s: J[W] = J[Hz^2] * hbar.
inline double heat_current_aj_per_s(double j_hz2, double hbar) {
  return j_hz2 * hbar * 1e18;
}

}  // namespace nv

#endif  // NV_ENTANGLEMENT_HPP
