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

// Lower bounds on Tr W F^-1 over n-copy channel measurements, the Fisher
// matrices attaining them, and the matrix / trace inequalities that cut out
// the achievable Fisher-matrix set.

#pragma once

#include "su2est/su2_model.hpp"

#include <optional>
#include <string>

namespace su2est {

template <typename Scalar = double>
struct WeightSpectrum {
  RMatrix<Scalar> W;
  RMatrix<Scalar> J;
  /// J^-1/2 W J^-1/2.
  RMatrix<Scalar> W_tilde;
  /// Ascending eigenvalues of W_tilde.
  RVector<Scalar> w;
  /// Rows are the eigenvectors |w_i>, so O W_tilde O^T = diag(w).
  RMatrix<Scalar> O;

  int dim() const { return static_cast<int>(w.size()); }
};

enum class Regime { d3_general, d3_n2_regime1, d3_n2_regime2, d2_even, d2_odd, d1 };

inline std::string regime_name(Regime r) {
  switch (r) {
    case Regime::d3_general: return "d3_general";
    case Regime::d3_n2_regime1: return "d3_n2_regime1";
    case Regime::d3_n2_regime2: return "d3_n2_regime2";
    case Regime::d2_even: return "d2_even";
    case Regime::d2_odd: return "d2_odd";
    case Regime::d1: return "d1";
  }
  return "unknown";
}

template <typename Scalar = double>
struct BoundReport {
  Scalar bound_value = 0;
  Regime regime = Regime::d3_general;
  std::optional<FisherMatrix<Scalar>> optimal_F;
  /// (Tr sqrt(W_tilde))^2.
  Scalar gm_constant = 0;
  /// False where no construction attaining the bound is known.
  bool achievability_known = true;
  /// d = 3, n = 2 only: the regime ratio lies within 1e-12 of 1/2, in which
  /// case alternate_value holds the other regime's formula.
  bool at_regime_boundary = false;
  std::optional<Scalar> alternate_value;
  /// sqrt(w_3) / sum sqrt(w_i) for d = 3, n = 2.
  std::optional<Scalar> regime_ratio;
};

/// Upper limit of Tr J^-1 F over n-copy measurements.
inline int trace_capacity(int n, int d) {
  if (n < 1) throw PreconditionError("copy count must be at least 1");
  switch (d) {
    case 1: return n * n;
    case 2: return n * n + 2 * n - (n % 2);
    case 3: return n * n + 2 * n;
    default: throw PreconditionError("parameter count must be 1, 2 or 3");
  }
}

namespace detail {

/// Replaces each cluster of (numerically) equal eigenvalues' eigenvectors by
/// the Gram-Schmidt orthonormalisation of the standard basis projected onto
/// that eigenspace, so degenerate spectra yield a canonical basis.
template <typename Scalar>
void canonicalise_degenerate(const RVector<Scalar>& w, RMatrix<Scalar>& v) {
  using std::abs;
  const Eigen::Index d = w.size();
  const Scalar scale = std::max(Scalar(1), w.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && abs(w(end) - w(start)) <= Scalar(1e-10) * scale) ++end;
    const Eigen::Index m = end - start;
    if (m > 1) {
      const RMatrix<Scalar> basis = v.middleCols(start, m);
      const RMatrix<Scalar> proj = basis * basis.transpose();
      Eigen::Index filled = 0;
      for (Eigen::Index k = 0; k < d && filled < m; ++k) {
        RVector<Scalar> c = proj.col(k);
        for (Eigen::Index j = 0; j < filled; ++j)
          c -= v.col(start + j).dot(c) * v.col(start + j);
        if (c.norm() < Scalar(1e-6)) continue;
        v.col(start + filled) = c.normalized();
        ++filled;
      }
    }
    start = end;
  }
}

}  // namespace detail

/// W_tilde, its ascending spectrum and the orthogonal O diagonalising it.
/// Eigenvectors have their first nonzero entry positive.
template <typename Scalar>
WeightSpectrum<Scalar> weight_spectrum(const RMatrix<Scalar>& W, const RMatrix<Scalar>& J) {
  const Eigen::Index d = W.rows();
  if (W.cols() != d || J.rows() != d || J.cols() != d)
    throw DimensionMismatch("W and J must be square of the same size");
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10))
    throw NotPositiveDefinite("weight matrix is not symmetric");
  if (min_eigenvalue(W) <= Scalar(0)) throw NotPositiveDefinite("weight matrix is not positive definite");
  WeightSpectrum<Scalar> s;
  s.W = (W + W.transpose()) / Scalar(2);
  s.J = J;
  const RMatrix<Scalar> jis = inv_sqrt_pd(J);
  s.W_tilde = jis * s.W * jis;
  s.W_tilde = (s.W_tilde + s.W_tilde.transpose()).eval() / Scalar(2);
  Eigen::SelfAdjointEigenSolver<RMatrix<Scalar>> es(s.W_tilde);
  s.w = es.eigenvalues();
  RMatrix<Scalar> v = es.eigenvectors();
  detail::canonicalise_degenerate(s.w, v);
  fix_column_signs(v);
  s.O = v.transpose();
  return s;
}

template <typename Scalar>
Scalar trace_sqrt(const WeightSpectrum<Scalar>& spec) {
  return spec.w.cwiseMax(Scalar(0)).cwiseSqrt().sum();
}

namespace detail {

template <typename Scalar>
bool proportional_to_identity(const WeightSpectrum<Scalar>& spec) {
  const Scalar scale = std::max(Scalar(1), spec.w.cwiseAbs().maxCoeff());
  return spec.w.maxCoeff() - spec.w.minCoeff() <= Scalar(1e-10) * scale;
}

template <typename Scalar>
void check_dims(const WeightSpectrum<Scalar>& spec, int n, int d) {
  if (n < 1) throw PreconditionError("copy count must be at least 1");
  if (d < 1 || d > 3) throw PreconditionError("parameter count must be 1, 2 or 3");
  if (spec.dim() != d) throw DimensionMismatch("weight spectrum dimension does not match d");
}

/// sqrt(J) M sqrt(J) for M expressed in the W_tilde frame.
template <typename Scalar>
FisherMatrix<Scalar> dress(const WeightSpectrum<Scalar>& spec, const RMatrix<Scalar>& m) {
  const RMatrix<Scalar> sj = sqrt_psd(spec.J);
  FisherMatrix<Scalar> f = sj * m * sj;
  return (f + f.transpose()) / Scalar(2);
}

template <typename Scalar>
Scalar regime1_value(Scalar c) {
  return c / Scalar(8);
}

template <typename Scalar>
Scalar regime2_value(const RVector<Scalar>& sw) {
  return (sw(0) + sw(1)) * (sw(0) + sw(1)) / Scalar(4) + sw(2) * sw(2) / Scalar(4);
}

}  // namespace detail

/// Fisher matrix attaining the bound, where a closed form exists. Throws
/// NoClosedForm for d = 2 unless W_tilde is proportional to the identity.
template <typename Scalar>
FisherMatrix<Scalar> optimal_fisher(const WeightSpectrum<Scalar>& spec, int n, int d) {
  using std::sqrt;
  detail::check_dims(spec, n, d);
  const RVector<Scalar> sw = spec.w.cwiseMax(Scalar(0)).cwiseSqrt();
  const Scalar tr = sw.sum();
  const RMatrix<Scalar> sqrt_wt = spec.O.transpose() * sw.asDiagonal() * spec.O;
  const Scalar cap = Scalar(trace_capacity(n, d));
  if (d == 1) return Scalar(n * n) * spec.J;
  if (d == 2) {
    if (!detail::proportional_to_identity(spec))
      throw NoClosedForm("no closed-form optimum for d = 2 with a general weight");
    return cap / Scalar(2) * spec.J;
  }
  if (n != 2) return detail::dress(spec, RMatrix<Scalar>(cap / tr * sqrt_wt));
  if (sw(2) / tr < Scalar(0.5)) return detail::dress(spec, RMatrix<Scalar>(Scalar(8) / tr * sqrt_wt));
  RMatrix<Scalar> m = RMatrix<Scalar>::Zero(3, 3);
  const Scalar s12 = sw(0) + sw(1);
  for (int i = 0; i < 2; ++i)
    m += Scalar(4) * sw(i) / s12 * spec.O.row(i).transpose() * spec.O.row(i);
  m += Scalar(4) * spec.O.row(2).transpose() * spec.O.row(2);
  return detail::dress(spec, m);
}

/// Lower bound on Tr W F^-1 over all n-copy channel measurements.
template <typename Scalar>
BoundReport<Scalar> gm_bound(const WeightSpectrum<Scalar>& spec, int n, int d) {
  using std::abs;
  using std::sqrt;
  detail::check_dims(spec, n, d);
  const RVector<Scalar> sw = spec.w.cwiseMax(Scalar(0)).cwiseSqrt();
  const Scalar tr = sw.sum();
  BoundReport<Scalar> r;
  r.gm_constant = tr * tr;
  const bool flat = detail::proportional_to_identity(spec);
  if (d == 1) {
    r.regime = Regime::d1;
    r.bound_value = spec.w(0) / Scalar(n * n);
  } else if (d == 2) {
    r.regime = n % 2 == 0 ? Regime::d2_even : Regime::d2_odd;
    r.bound_value = r.gm_constant / Scalar(trace_capacity(n, d));
    r.achievability_known = flat;
  } else if (n != 2) {
    r.regime = Regime::d3_general;
    r.bound_value = r.gm_constant / Scalar(n * n + 2 * n);
    if (n == 1)
      r.achievability_known = flat;
    else
      r.achievability_known = n >= 3 && Scalar(n) + Scalar(1e-12) >= (sw(1) + sw(2)) / sw(0) - Scalar(1);
  } else {
    const Scalar ratio = sw(2) / tr;
    r.regime_ratio = ratio;
    const Scalar v1 = detail::regime1_value(r.gm_constant);
    const Scalar v2 = detail::regime2_value(sw);
    if (ratio < Scalar(0.5)) {
      r.regime = Regime::d3_n2_regime1;
      r.bound_value = v1;
    } else {
      r.regime = Regime::d3_n2_regime2;
      r.bound_value = v2;
    }
    if (abs(ratio - Scalar(0.5)) <= Scalar(1e-12)) {
      r.at_regime_boundary = true;
      r.alternate_value = ratio < Scalar(0.5) ? v2 : v1;
    }
  }
  if (d == 3 || d == 1 || flat) r.optimal_F = optimal_fisher(spec, n, d);
  return r;
}

/// n^2 J - F is PSD (smallest eigenvalue >= -tol).
template <typename Scalar>
bool check_matrix_inequality(const FisherMatrix<Scalar>& F, const RMatrix<Scalar>& J, int n,
                             Scalar tol = Scalar(Tolerances::inequality)) {
  if (F.rows() != J.rows() || F.cols() != J.cols()) throw DimensionMismatch("F and J sizes differ");
  return min_eigenvalue(RMatrix<Scalar>(Scalar(n * n) * J - F)) >= -tol;
}

template <typename Scalar>
Scalar fisher_trace(const FisherMatrix<Scalar>& F, const RMatrix<Scalar>& J) {
  if (F.rows() != J.rows() || F.cols() != J.cols()) throw DimensionMismatch("F and J sizes differ");
  return J.ldlt().solve(F).trace();
}

/// Tr J^-1 F <= trace_capacity(n, d) + tol.
template <typename Scalar>
bool check_trace_inequality(const FisherMatrix<Scalar>& F, const RMatrix<Scalar>& J, int n, int d,
                            Scalar tol = Scalar(Tolerances::inequality)) {
  return fisher_trace(F, J) <= Scalar(trace_capacity(n, d)) + tol;
}

/// Tr W F^-1; throws SingularFisher when F is not invertible.
template <typename Scalar>
Scalar weighted_trace(const RMatrix<Scalar>& W, const FisherMatrix<Scalar>& F) {
  const Scalar scale = std::max(Scalar(1), F.cwiseAbs().maxCoeff());
  if (min_eigenvalue(F) <= Scalar(1e-10) * scale) throw SingularFisher("Fisher matrix is singular");
  return F.ldlt().solve(W).trace();
}

}  // namespace su2est
