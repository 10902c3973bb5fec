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

#ifndef NV_LINALG_HPP
#define NV_LINALG_HPP

#include <Eigen/Dense>
#include <complex>

#include <unsupported/Eigen/MatrixFunctions>

namespace nv {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix2c = Eigen::Matrix<Complex<Real>, 2, 2>;
template <typename Real>
using Matrix4c = Eigen::Matrix<Complex<Real>, 4, 4>;
template <typename Real>
using Matrix16c = Eigen::Matrix<Complex<Real>, 16, 16>;
template <typename Real>
using Vector16c = Eigen::Matrix<Complex<Real>, 16, 1>;

using Matrix2cd = Matrix2c<double>;
using Matrix4cd = Matrix4c<double>;
using Matrix16cd = Matrix16c<double>;
using Vector16cd = Vector16c<double>;

// Kronecker product with compile-time sizes.  Expression-friendly: accepts any
// dense expressions, evaluates them once, returns a fixed-size matrix.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a_expr,
          const Eigen::MatrixBase<DerivedB>& b_expr) {
  constexpr int ra = DerivedA::RowsAtCompileTime;
  constexpr int ca = DerivedA::ColsAtCompileTime;
  constexpr int rb = DerivedB::RowsAtCompileTime;
  constexpr int cb = DerivedB::ColsAtCompileTime;
  static_assert(ra > 0 && ca > 0 && rb > 0 && cb > 0,
                "kron requires fixed-size operands");
  using Scalar = typename DerivedA::Scalar;
  const typename DerivedA::PlainObject a = a_expr;
  const typename DerivedB::PlainObject b = b_expr;
  Eigen::Matrix<Scalar, ra * rb, ca * cb> out;
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < ca; ++j)
      out.template block<rb, cb>(i * rb, j * cb) = a(i, j) * b;
  return out;
}

// Column-stacking vectorization: vec(rho) stacks the columns of rho top to
// bottom, so vec(A rho B) = (B^T (x) A) vec(rho).  Every superoperator in this
// codebase is written against this convention; do not mix with row-stacking.
template <typename Real>
Vector16c<Real> vec(const Matrix4c<Real>& rho) {
  Vector16c<Real> v;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) v(4 * j + i) = rho(i, j);
  return v;
}

template <typename Real>
Matrix4c<Real> unvec(const Vector16c<Real>& v) {
  Matrix4c<Real> rho;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) rho(i, j) = v(4 * j + i);
  return rho;
}

template <typename Real>
Matrix4c<Real> hermitize(const Matrix4c<Real>& m) {
  return Real(0.5) * (m + m.adjoint()).eval();
}

// Frobenius measure of how far a matrix is from Hermitian.
template <typename Real>
Real hermiticity_error(const Matrix4c<Real>& m) {
  return (m - m.adjoint().eval()).norm();
}

template <typename Real>
Real min_eigenvalue(const Matrix4c<Real>& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c<Real>> es(hermitize(rho));
  return es.eigenvalues().minCoeff();
}

// Trace distance (1/2)*||a - b||_1 between Hermitian matrices; the difference
// is re-Hermitized first so floating-point asymmetry cannot leak imaginary
// eigenvalue parts into the result.
template <typename Real>
Real trace_distance(const Matrix4c<Real>& a, const Matrix4c<Real>& b) {
  Eigen::SelfAdjointEigenSolver<Matrix4c<Real>> es(hermitize<Real>(a - b));
  return Real(0.5) * es.eigenvalues().cwiseAbs().sum();
}

// Dense matrix exponential (Pade approximant with scaling and squaring, as
// shipped by Eigen).  Thin wrapper so callers never include the unsupported
// header themselves.
template <typename Derived>
typename Derived::PlainObject matrix_exp(const Eigen::MatrixBase<Derived>& m) {
  return m.derived().exp();
}

}  // namespace nv

#endif  // NV_LINALG_HPP
