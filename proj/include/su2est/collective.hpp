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

// n-copy collective operators, the Casimir operator and Dicke-type states.
// Site 1 is the most significant tensor factor throughout.

#pragma once

#include "su2est/su2_model.hpp"

#include <string>

namespace su2est {

template <typename Scalar = double>
struct CollectiveOp {
  int n = 0;
  CMatrix<Scalar> matrix;
};

template <typename Scalar = double>
struct DickeState {
  int axis = 0;  // 0-based
  int n = 0;
  int t = 0;
  CVector<Scalar> vector;
};

inline void check_copy_count(int n, int cap) {
  if (n < 1) throw PreconditionError("copy count must be at least 1");
  if (n > cap)
    throw SizeLimit("copy count " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
}

/// I^(k-1) (x) X (x) I^(n-k), k = 1..n.
template <typename Scalar>
CMatrix<Scalar> embed_site(const Matrix2c<Scalar>& x, int site, int n) {
  check_copy_count(n, kDefaultCopyCap);
  if (site < 1 || site > n) throw IndexError("site must lie in 1..n");
  const CMatrix<Scalar> left = CMatrix<Scalar>::Identity(Eigen::Index(1) << (site - 1),
                                                         Eigen::Index(1) << (site - 1));
  const CMatrix<Scalar> right = CMatrix<Scalar>::Identity(Eigen::Index(1) << (n - site),
                                                          Eigen::Index(1) << (n - site));
  return kron(kron(left, x), right);
}

/// X^(n) = sum_k I^(k-1) (x) X (x) I^(n-k).
template <typename Scalar>
CollectiveOp<Scalar> collective_op(const Matrix2c<Scalar>& x, int n, int cap = kDefaultCopyCap) {
  check_copy_count(n, cap);
  // Build by the recursion X^(n) = X^(n-1) (x) I + I_{2^(n-1)} (x) X.
  CMatrix<Scalar> acc = x;
  for (int m = 2; m <= n; ++m) {
    const Eigen::Index prev = Eigen::Index(1) << (m - 1);
    acc = kron(acc, Matrix2c<Scalar>(Matrix2c<Scalar>::Identity())) +
          kron(CMatrix<Scalar>(CMatrix<Scalar>::Identity(prev, prev)), x);
  }
  return CollectiveOp<Scalar>{n, acc};
}

/// C^(n) = X_1^(n)^2 + X_2^(n)^2 + X_3^(n)^2.
template <typename Scalar>
CollectiveOp<Scalar> casimir(const ObservableFrame<Scalar>& frame, int n,
                             int cap = kDefaultCopyCap) {
  check_copy_count(n, cap);
  const Eigen::Index dim = Eigen::Index(1) << n;
  CMatrix<Scalar> c = CMatrix<Scalar>::Zero(dim, dim);
  for (int a = 0; a < 3; ++a) {
    const CMatrix<Scalar> xn = collective_op(frame.X[a], n, cap).matrix;
    c += xn * xn;
  }
  return CollectiveOp<Scalar>{n, c};
}

/// Unit-normalised symmetric superposition of all arrangements of t copies of
/// e_axis^+ and n - t copies of e_axis^-.
template <typename Scalar>
DickeState<Scalar> dicke(const ObservableFrame<Scalar>& frame, int axis, int n, int t,
                         int cap = kDefaultCopyCap) {
  check_copy_count(n, cap);
  if (axis < 0 || axis > 2) throw IndexError("axis must be 0, 1 or 2");
  if (t < 0 || t > n) throw IndexError("excitation count t must lie in 0..n");
  const Eigen::Index dim = Eigen::Index(1) << n;
  CVector<Scalar> acc = CVector<Scalar>::Zero(dim);
  // Each n-bit mask with popcount t marks the sites carrying e^+.
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != t) continue;
    CVector<Scalar> prod = CVector<Scalar>::Ones(1);
    for (int site = 0; site < n; ++site) {
      const bool plus = (mask >> (n - 1 - site)) & 1u;
      prod = kron_vec(prod, plus ? frame.e_plus[axis] : frame.e_minus[axis]);
    }
    acc += prod;
  }
  acc.normalize();
  return DickeState<Scalar>{axis, n, t, acc};
}

}  // namespace su2est
