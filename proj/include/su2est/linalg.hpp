// Copyright 2026 The su2est Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "su2est/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace su2est {

/// Pauli matrix sigma_k for k = 1, 2, 3 (k = 0 gives the identity).
template <typename Scalar = double> Matrix2c<Scalar> pauli(int k) {
  using C = Complex<Scalar>;
  Matrix2c<Scalar> s;
  switch (k) {
    case 0: s << C(1), C(0), C(0), C(1); break;
    case 1: s << C(0), C(1), C(1), C(0); break;
    case 2: s << C(0), C(0, -1), C(0, 1), C(0); break;
    case 3: s << C(1), C(0), C(0), C(-1); break;
    default: throw IndexError("pauli index must be in 0..3");
  }
  return s;
}

/// Kronecker product a (x) b; a's index is the most significant.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using T = typename DerivedA::Scalar;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                       a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Vector Kronecker product.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> kron_vec(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using T = typename DerivedA::Scalar;
  Eigen::Matrix<T, Eigen::Dynamic, 1> out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// n-fold tensor power of a square matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> tensor_power(
    const Eigen::MatrixBase<Derived>& m, int n) {
  using T = typename Derived::Scalar;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, m);
  return out;
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real hermiticity_error(
    const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real max_abs_imag(
    const Eigen::MatrixBase<Derived>& m) {
  return m.imag().cwiseAbs().maxCoeff();
}

/// Smallest eigenvalue of the Hermitian part of m.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real min_eigenvalue(
    const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::Scalar;
  using M = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  const M h = (m + m.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<M> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Largest eigenvalue of the Hermitian part of m.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real max_eigenvalue(
    const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::Scalar;
  using M = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  const M h = (m + m.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<M> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// Square root of a real symmetric PSD matrix. Eigenvalues in (-1e-12, 0)
/// are clamped to zero; anything more negative is rejected.
template <typename Scalar>
RMatrix<Scalar> sqrt_psd(const RMatrix<Scalar>& m) {
  Eigen::SelfAdjointEigenSolver<RMatrix<Scalar>> es((m + m.transpose()) / 2);
  RVector<Scalar> ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < Scalar(-1e-12)) throw NotPositiveDefinite("matrix is not positive semidefinite");
    ev(i) = ev(i) < Scalar(0) ? Scalar(0) : ev(i);
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

/// Inverse square root of a real symmetric positive definite matrix.
template <typename Scalar>
RMatrix<Scalar> inv_sqrt_pd(const RMatrix<Scalar>& m) {
  Eigen::SelfAdjointEigenSolver<RMatrix<Scalar>> es((m + m.transpose()) / 2);
  const RVector<Scalar>& ev = es.eigenvalues();
  if (ev(0) <= Scalar(0)) throw NotPositiveDefinite("matrix is not positive definite");
  return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

/// Multiplies v by a global phase so that its first component of largest
/// modulus is real and positive.
template <typename Derived>
void fix_phase(Eigen::MatrixBase<Derived>& v) {
  using std::abs;
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const Real largest = v.cwiseAbs().maxCoeff();
  if (largest == Real(0)) return;
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (abs(v(i)) >= largest - Real(1e-12)) {
      pivot = i;
      break;
    }
  }
  v *= abs(v(pivot)) / v(pivot);
}

/// Flips the sign of each column so that its first entry with modulus above
/// 1e-12 is positive.
template <typename Scalar>
void fix_column_signs(RMatrix<Scalar>& m) {
  using std::abs;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (abs(m(i, j)) > Scalar(1e-12)) {
        if (m(i, j) < Scalar(0)) m.col(j) *= Scalar(-1);
        break;
      }
    }
  }
}

template <typename Scalar>
bool is_orthogonal(const RMatrix<Scalar>& o, Scalar tol) {
  if (o.rows() != o.cols()) return false;
  const RMatrix<Scalar> eye = RMatrix<Scalar>::Identity(o.rows(), o.cols());
  return ((o * o.transpose()) - eye).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace su2est
