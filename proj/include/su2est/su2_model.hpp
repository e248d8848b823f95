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

// Parametric SU(2) unitary families U_theta = exp(i sum_j theta^j G_j), the
// channel Fisher matrix J = 2 [Tr (d_i U)^* (d_j U)] and the observable frame
// X_1, X_2, X_3 built from it.

#pragma once

#include "su2est/linalg.hpp"

#include <array>
#include <utility>
#include <vector>

namespace su2est {

template <typename Scalar = double>
struct UnitaryFamily {
  /// Traceless Hermitian 2x2 generators G_1..G_d.
  std::vector<Matrix2c<Scalar>> generators;
  /// Reference point theta0.
  RVector<Scalar> base_point;

  int dim() const { return static_cast<int>(generators.size()); }
};

template <typename Scalar = double>
struct ChannelFisher {
  RMatrix<Scalar> J;
};

/// The observable frame at theta0. Indices are 0-based: X[0] is X_1.
template <typename Scalar = double>
struct ObservableFrame {
  int d = 0;
  RMatrix<Scalar> K;
  RMatrix<Scalar> K_inv;
  RMatrix<Scalar> O;
  std::array<Matrix2c<Scalar>, 3> X;
  std::array<Vector2c<Scalar>, 3> e_plus;
  std::array<Vector2c<Scalar>, 3> e_minus;
  /// c(j, i) = <e_i^-| X_j |e_i^+> for j != i; the diagonal is zero.
  Eigen::Matrix<Complex<Scalar>, 3, 3> c;
};

/// Builds a family and checks its invariants. Throws PreconditionError when a
/// generator is not traceless Hermitian or theta0 has the wrong length.
template <typename Scalar>
UnitaryFamily<Scalar> make_family(std::vector<Matrix2c<Scalar>> generators,
                                  RVector<Scalar> base_point) {
  using std::abs;
  const int d = static_cast<int>(generators.size());
  if (d < 1 || d > 3) throw PreconditionError("parameter count must be 1, 2 or 3");
  if (base_point.size() != d)
    throw DimensionMismatch("theta0 length does not match the number of generators");
  for (const auto& g : generators) {
    if (hermiticity_error(g) > Scalar(1e-12)) throw PreconditionError("generator is not Hermitian");
    if (abs(g.trace()) > Scalar(1e-12)) throw PreconditionError("generator is not traceless");
  }
  return UnitaryFamily<Scalar>{std::move(generators), std::move(base_point)};
}

/// Generators sigma_k / 2 for k = 1..d.
template <typename Scalar = double>
UnitaryFamily<Scalar> pauli_family(int d, RVector<Scalar> base_point) {
  std::vector<Matrix2c<Scalar>> gens;
  for (int k = 1; k <= d; ++k) gens.push_back(pauli<Scalar>(k) / Scalar(2));
  return make_family<Scalar>(std::move(gens), std::move(base_point));
}

/// One-parameter phase family with generator sigma_3 / 2.
template <typename Scalar = double>
UnitaryFamily<Scalar> phase_family(Scalar theta0) {
  RVector<Scalar> t(1);
  t << theta0;
  return make_family<Scalar>({pauli<Scalar>(3) / Scalar(2)}, std::move(t));
}

namespace detail {

template <typename Scalar>
Matrix2c<Scalar> hamiltonian(const UnitaryFamily<Scalar>& family, const RVector<Scalar>& theta) {
  if (theta.size() != family.dim()) throw DimensionMismatch("theta length does not match family");
  Matrix2c<Scalar> h = Matrix2c<Scalar>::Zero();
  for (int j = 0; j < family.dim(); ++j) h += theta(j) * family.generators[j];
  return h;
}

}  // namespace detail

/// U_theta = exp(i H(theta)) via the eigendecomposition of H.
template <typename Scalar>
Matrix2c<Scalar> unitary(const UnitaryFamily<Scalar>& family, const RVector<Scalar>& theta) {
  using std::cos;
  using std::sin;
  Eigen::SelfAdjointEigenSolver<Matrix2c<Scalar>> es(detail::hamiltonian(family, theta));
  const auto& v = es.eigenvectors();
  Eigen::Matrix<Complex<Scalar>, 2, 1> phases;
  for (int k = 0; k < 2; ++k) {
    const Scalar l = es.eigenvalues()(k);
    phases(k) = Complex<Scalar>(cos(l), sin(l));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

template <typename Scalar>
Matrix2c<Scalar> unitary(const UnitaryFamily<Scalar>& family) {
  return unitary(family, family.base_point);
}

/// Derivative d U / d theta^direction (0-based direction) at theta, from the
/// Daleckii-Krein formula: with H = V diag(l) V^*, the Frechet derivative of
/// exp(iH) along iE is V (G o (V^* iE V)) V^* where G_kl is the divided
/// difference of exp(i l) between l_k and l_l.
template <typename Scalar>
Matrix2c<Scalar> unitary_derivative(const UnitaryFamily<Scalar>& family, int direction,
                                    const RVector<Scalar>& theta) {
  using std::cos;
  using std::sin;
  if (direction < 0 || direction >= family.dim())
    throw IndexError("derivative direction out of range");
  Eigen::SelfAdjointEigenSolver<Matrix2c<Scalar>> es(detail::hamiltonian(family, theta));
  const Matrix2c<Scalar>& v = es.eigenvectors();
  const auto& l = es.eigenvalues();
  const Complex<Scalar> i(0, 1);
  Matrix2c<Scalar> inner = v.adjoint() * (i * family.generators[direction]) * v;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      // (e^{i l_a} - e^{i l_b}) / (i (l_a - l_b)) = e^{i m} sin(h) / h,
      // m = (l_a + l_b) / 2, h = (l_a - l_b) / 2.
      const Scalar m = (l(a) + l(b)) / 2;
      const Scalar h = (l(a) - l(b)) / 2;
      const Scalar sinc = h == Scalar(0) ? Scalar(1) : sin(h) / h;
      inner(a, b) *= Complex<Scalar>(cos(m), sin(m)) * sinc;
    }
  }
  return v * inner * v.adjoint();
}

template <typename Scalar>
Matrix2c<Scalar> unitary_derivative(const UnitaryFamily<Scalar>& family, int direction) {
  return unitary_derivative(family, direction, family.base_point);
}

/// J_ij = 2 Re Tr (d_i U)^* (d_j U) at theta0. Throws DegenerateModel when
/// the smallest eigenvalue is below 1e-10.
template <typename Scalar>
ChannelFisher<Scalar> channel_fisher(const UnitaryFamily<Scalar>& family) {
  const int d = family.dim();
  std::vector<Matrix2c<Scalar>> du;
  for (int j = 0; j < d; ++j) du.push_back(unitary_derivative(family, j));
  RMatrix<Scalar> J(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const Complex<Scalar> tr = Scalar(2) * (du[a].adjoint() * du[b]).trace();
      if (std::abs(tr.imag()) > Scalar(Tolerances::construction))
        throw DegenerateModel("channel Fisher trace has a non-vanishing imaginary part");
      J(a, b) = tr.real();
    }
  }
  J = (J + J.transpose()).eval() / Scalar(2);
  if (min_eigenvalue(J) < Scalar(Tolerances::construction))
    throw DegenerateModel("channel Fisher matrix is singular");
  return ChannelFisher<Scalar>{J};
}

/// Eigenvectors of a 2x2 Hermitian X with eigenvalues +1 / -1, each with the
/// phase convention of fix_phase(). Returns (e+, e-).
template <typename Scalar>
std::pair<Vector2c<Scalar>, Vector2c<Scalar>> eigenframe(const Matrix2c<Scalar>& x) {
  Eigen::SelfAdjointEigenSolver<Matrix2c<Scalar>> es(x);
  Vector2c<Scalar> minus = es.eigenvectors().col(0);
  Vector2c<Scalar> plus = es.eigenvectors().col(1);
  fix_phase(plus);
  fix_phase(minus);
  return {plus, minus};
}

/// X_i = (2/i) sum_j K_ij (d_j U) U^* with K = O sqrt(J^{-1}); frames with
/// d < 3 are completed to a full Pauli-like triple.
template <typename Scalar>
ObservableFrame<Scalar> observable_frame(const ChannelFisher<Scalar>& fisher,
                                         const UnitaryFamily<Scalar>& family,
                                         const RMatrix<Scalar>& O) {
  using std::abs;
  const int d = family.dim();
  if (fisher.J.rows() != d || O.rows() != d || O.cols() != d)
    throw DimensionMismatch("J, O and family dimensions disagree");
  if (!is_orthogonal(O, Scalar(1e-12))) throw PreconditionError("O is not orthogonal");
  const Scalar tol = Scalar(Tolerances::construction);

  ObservableFrame<Scalar> f;
  f.d = d;
  f.O = O;
  f.K = O * inv_sqrt_pd(fisher.J);
  Eigen::FullPivLU<RMatrix<Scalar>> lu(f.K);
  if (!lu.isInvertible()) throw DegenerateModel("K is not invertible");
  f.K_inv = lu.inverse();

  const Matrix2c<Scalar> u0 = unitary(family);
  std::vector<Matrix2c<Scalar>> du_ustar;
  for (int j = 0; j < d; ++j) du_ustar.push_back(unitary_derivative(family, j) * u0.adjoint());
  const Complex<Scalar> two_over_i(0, -2);
  for (int a = 0; a < d; ++a) {
    Matrix2c<Scalar> x = Matrix2c<Scalar>::Zero();
    for (int j = 0; j < d; ++j) x += f.K(a, j) * du_ustar[j];
    x *= two_over_i;
    f.X[a] = (x + x.adjoint()) / Scalar(2);
  }
  const Complex<Scalar> minus_i(0, -1);
  if (d == 1) {
    const auto [p, m] = eigenframe(f.X[0]);
    Matrix2c<Scalar> x2 = p * m.adjoint() + m * p.adjoint();
    f.X[1] = x2;
  }
  if (d <= 2) {
    Matrix2c<Scalar> x3 = minus_i * f.X[0] * f.X[1];
    f.X[2] = (x3 + x3.adjoint()) / Scalar(2);
  }

  const Matrix2c<Scalar> eye = Matrix2c<Scalar>::Identity();
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const Matrix2c<Scalar> ac = f.X[a] * f.X[b] + f.X[b] * f.X[a];
      const Matrix2c<Scalar> expect = a == b ? Matrix2c<Scalar>(Scalar(2) * eye)
                                             : Matrix2c<Scalar>(Matrix2c<Scalar>::Zero());
      if ((ac - expect).cwiseAbs().maxCoeff() > tol)
        throw DegenerateModel("frame observables violate the Pauli relations");
    }
  }

  for (int a = 0; a < 3; ++a) {
    auto [p, m] = eigenframe(f.X[a]);
    f.e_plus[a] = p;
    f.e_minus[a] = m;
  }
  f.c.setZero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      f.c(j, i) = f.e_minus[i].dot(f.X[j] * f.e_plus[i]);
    }
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    if (abs(abs(f.c(j, i)) - Scalar(1)) > tol || abs(abs(f.c(k, i)) - Scalar(1)) > tol ||
        abs((std::conj(f.c(j, i)) * f.c(k, i)).real()) > tol)
      throw DegenerateModel("eigenframe phases violate |c| = 1 / Re conj(c_j) c_k = 0");
  }
  return f;
}

/// Frame with O = I.
template <typename Scalar>
ObservableFrame<Scalar> observable_frame(const ChannelFisher<Scalar>& fisher,
                                         const UnitaryFamily<Scalar>& family) {
  return observable_frame(fisher, family,
                          RMatrix<Scalar>(RMatrix<Scalar>::Identity(family.dim(), family.dim())));
}

/// Coefficients A with X_i = sum_k A_ik sigma_k (i = 0..2).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> pauli_coefficients(const ObservableFrame<Scalar>& frame) {
  Eigen::Matrix<Scalar, 3, 3> a;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      a(i, k) = ((frame.X[i] * pauli<Scalar>(k + 1)).trace() / Scalar(2)).real();
  return a;
}

}  // namespace su2est
