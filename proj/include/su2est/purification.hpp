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

// Generalised purification of a state on H (x) H_a and the reduction of a
// mixed-input channel measurement to a pure-input one on H (x) H_b with
// dim H_b <= dim H. Randomized strategies are lifted to a single mixed-input
// measurement with a classical flag register.

#pragma once

#include "su2est/estimation.hpp"

#include <vector>

namespace su2est {

/// Lambda: B(H_in) -> B(H_out), Lambda(B) = sum_m A_m B A_m^*, each A_m is
/// out_dim x in_dim.
template <typename Scalar = double>
struct KrausChannel {
  std::vector<CMatrix<Scalar>> kraus;
  Eigen::Index in_dim = 0;
  Eigen::Index out_dim = 0;

  CMatrix<Scalar> apply(const CMatrix<Scalar>& b) const {
    CMatrix<Scalar> out = CMatrix<Scalar>::Zero(out_dim, out_dim);
    for (const auto& a : kraus) out += a * b * a.adjoint();
    return out;
  }

  /// Heisenberg-picture dual, sum_m A_m^* Y A_m.
  CMatrix<Scalar> adjoint(const CMatrix<Scalar>& y) const {
    CMatrix<Scalar> out = CMatrix<Scalar>::Zero(in_dim, in_dim);
    for (const auto& a : kraus) out += a.adjoint() * y * a;
    return out;
  }

  /// (id_h (x) Lambda)(X) for X on C^h (x) H_in.
  CMatrix<Scalar> apply_local(const CMatrix<Scalar>& x, Eigen::Index h) const {
    const CMatrix<Scalar> eye = CMatrix<Scalar>::Identity(h, h);
    CMatrix<Scalar> out = CMatrix<Scalar>::Zero(h * out_dim, h * out_dim);
    for (const auto& a : kraus) {
      const CMatrix<Scalar> big = kron(eye, a);
      out += big * x * big.adjoint();
    }
    return out;
  }

  /// (id_h (x) Lambda)^*(Y) for Y on C^h (x) H_out.
  CMatrix<Scalar> adjoint_local(const CMatrix<Scalar>& y, Eigen::Index h) const {
    const CMatrix<Scalar> eye = CMatrix<Scalar>::Identity(h, h);
    CMatrix<Scalar> out = CMatrix<Scalar>::Zero(h * in_dim, h * in_dim);
    for (const auto& a : kraus) {
      const CMatrix<Scalar> big = kron(eye, a);
      out += big.adjoint() * y * big;
    }
    return out;
  }

  /// max |sum_m A_m^* A_m - I|.
  Scalar trace_preservation_error() const {
    CMatrix<Scalar> s = CMatrix<Scalar>::Zero(in_dim, in_dim);
    for (const auto& a : kraus) s += a.adjoint() * a;
    return (s - CMatrix<Scalar>::Identity(in_dim, in_dim)).cwiseAbs().maxCoeff();
  }
};

template <typename Scalar = double>
struct Purification {
  /// Unit vector on H (x) H_b, index = h_index * dim_b + b_index.
  CVector<Scalar> psi;
  KrausChannel<Scalar> channel;
  int dim_b = 0;
};

/// Input state rho on (C^2)^(x)n (x) C^a measured by a POVM on the same space.
template <typename Scalar = double>
struct MixedChannelMeasurement {
  int n = 1;
  int ancilla_dim = 1;
  CMatrix<Scalar> rho;
  POVM<Scalar> povm;

  Eigen::Index dim() const { return (Eigen::Index(1) << n) * ancilla_dim; }
};

template <typename Scalar = double>
struct ReducedMeasurement {
  ChannelMeasurement<Scalar> measurement;
  KrausChannel<Scalar> channel;
};

/// Throws NotAState unless rho is Hermitian, PSD and has unit trace to tol.
template <typename Scalar>
void validate_density(const CMatrix<Scalar>& rho, Scalar tol = Scalar(1e-9)) {
  using std::abs;
  if (rho.rows() != rho.cols()) throw NotAState("density matrix is not square");
  if (hermiticity_error(rho) > tol) throw NotAState("density matrix is not Hermitian");
  if (min_eigenvalue(rho) < -tol) throw NotAState("density matrix is not positive semidefinite");
  if (abs(rho.trace() - Complex<Scalar>(1)) > tol) throw NotAState("density matrix trace is not 1");
}

/// Purification of rho on C^h (x) C^a: returns psi on C^h (x) C^b and a channel
/// Lambda: B(C^b) -> B(C^a) with (id (x) Lambda)(psi psi^*) = rho and b <= h.
template <typename Scalar>
Purification<Scalar> purify(const CMatrix<Scalar>& rho, Eigen::Index h, Eigen::Index a) {
  using std::sqrt;
  validate_density(rho);
  if (rho.rows() != h * a) throw DimensionMismatch("density matrix does not match h * a");
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es((rho + rho.adjoint()) / Scalar(2));
  const RVector<Scalar>& ev = es.eigenvalues();
  const Scalar cutoff = Scalar(1e-11) * ev(ev.size() - 1);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = ev.size() - 1; k >= 0; --k)
    if (ev(k) > cutoff) kept.push_back(k);
  const Eigen::Index r = static_cast<Eigen::Index>(kept.size());

  // psi' = sum_k sqrt(p_k) e_k (x) g_k on (C^h (x) C^a) (x) C^r, viewed as an
  // h x (a r) matrix across the H | (H_a (x) H_a') cut.
  CMatrix<Scalar> m = CMatrix<Scalar>::Zero(h, a * r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const Scalar amp = sqrt(ev(kept[k]));
    const auto e = es.eigenvectors().col(kept[k]);
    for (Eigen::Index s = 0; s < h; ++s)
      for (Eigen::Index anc = 0; anc < a; ++anc) m(s, anc * r + k) = amp * e(s * a + anc);
  }
  Eigen::JacobiSVD<CMatrix<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector<Scalar>& sv = svd.singularValues();
  Eigen::Index b = 0;
  while (b < sv.size() && sv(b) * sv(b) > Scalar(1e-11) * sv(0) * sv(0)) ++b;

  Purification<Scalar> out;
  out.dim_b = static_cast<int>(b);
  out.psi = CVector<Scalar>::Zero(h * b);
  for (Eigen::Index k = 0; k < b; ++k)
    for (Eigen::Index s = 0; s < h; ++s) out.psi(s * b + k) = sv(k) * svd.matrixU()(s, k);
  out.psi.normalize();

  // E g_k = f'_k = conj(v_k); the Kraus operators slice E along the H_a' basis.
  const CMatrix<Scalar> e = svd.matrixV().leftCols(b).conjugate();
  out.channel.in_dim = b;
  out.channel.out_dim = a;
  for (Eigen::Index mm = 0; mm < r; ++mm) {
    CMatrix<Scalar> am(a, b);
    for (Eigen::Index anc = 0; anc < a; ++anc) am.row(anc) = e.row(anc * r + mm);
    out.channel.kraus.push_back(std::move(am));
  }
  return out;
}

/// Pure-input measurement (psi, N) on C^(2^n) (x) C^b reproducing the outcome
/// distribution of (rho, M) for every unitary on the system, with
/// N(x) = (id (x) Lambda)^*(M(x)).
template <typename Scalar>
ReducedMeasurement<Scalar> reduce_measurement(const MixedChannelMeasurement<Scalar>& mcm) {
  const Eigen::Index h = Eigen::Index(1) << mcm.n;
  validate_povm(mcm.povm, mcm.dim());
  const Purification<Scalar> pur = purify(mcm.rho, h, mcm.ancilla_dim);
  ReducedMeasurement<Scalar> out;
  out.channel = pur.channel;
  out.measurement.input = InputState<Scalar>{mcm.n, pur.dim_b, pur.psi};
  for (const auto& m : mcm.povm.elements) {
    CMatrix<Scalar> nx = pur.channel.adjoint_local(m, h);
    out.measurement.povm.elements.push_back((nx + nx.adjoint()) / Scalar(2));
  }
  return out;
}

/// p(x) = Tr M(x) V rho V^* with V = U_theta^(x)n (x) I.
template <typename Scalar>
RVector<Scalar> mixed_probabilities(const MixedChannelMeasurement<Scalar>& mcm,
                                    const UnitaryFamily<Scalar>& family,
                                    const RVector<Scalar>& theta) {
  const CMatrix<Scalar> v =
      kron(tensor_power(unitary(family, theta), mcm.n),
           CMatrix<Scalar>(CMatrix<Scalar>::Identity(mcm.ancilla_dim, mcm.ancilla_dim)));
  const CMatrix<Scalar> out = v * mcm.rho * v.adjoint();
  RVector<Scalar> p(mcm.povm.size());
  for (std::size_t x = 0; x < mcm.povm.size(); ++x)
    p(static_cast<Eigen::Index>(x)) = (mcm.povm.elements[x] * out).trace().real();
  return p;
}

/// Classical Fisher matrix of a mixed-input measurement at theta0, with
/// d_i p(x) = 2 Re Tr M(x) (d_i V) rho V^*.
template <typename Scalar>
FisherMatrix<Scalar> mixed_classical_fisher(const MixedChannelMeasurement<Scalar>& mcm,
                                            const UnitaryFamily<Scalar>& family) {
  validate_density(mcm.rho);
  validate_povm(mcm.povm, mcm.dim());
  const int d = family.dim();
  const Matrix2c<Scalar> u = unitary(family);
  const CMatrix<Scalar> eye_a = CMatrix<Scalar>::Identity(mcm.ancilla_dim, mcm.ancilla_dim);
  const CMatrix<Scalar> v = kron(tensor_power(u, mcm.n), eye_a);
  std::vector<CMatrix<Scalar>> dv;
  for (int i = 0; i < d; ++i) {
    const Matrix2c<Scalar> du = unitary_derivative(family, i);
    const Eigen::Index dim = Eigen::Index(1) << mcm.n;
    CMatrix<Scalar> acc = CMatrix<Scalar>::Zero(dim, dim);
    for (int site = 0; site < mcm.n; ++site) {
      CMatrix<Scalar> term = CMatrix<Scalar>::Identity(1, 1);
      for (int k = 0; k < mcm.n; ++k) term = kron(term, k == site ? du : u);
      acc += term;
    }
    dv.push_back(kron(acc, eye_a));
  }
  OutcomeDistribution<Scalar> dist{RVector<Scalar>(mcm.povm.size()),
                                   RMatrix<Scalar>(mcm.povm.size(), d)};
  const CMatrix<Scalar> out = v * mcm.rho * v.adjoint();
  for (std::size_t x = 0; x < mcm.povm.size(); ++x) {
    const auto ix = static_cast<Eigen::Index>(x);
    dist.p(ix) = (mcm.povm.elements[x] * out).trace().real();
    for (int i = 0; i < d; ++i)
      dist.dp(ix, i) =
          Scalar(2) * (mcm.povm.elements[x] * dv[i] * mcm.rho * v.adjoint()).trace().real();
  }
  return fisher_from_distribution(dist);
}

/// Mixed-input view of a pure-input measurement.
template <typename Scalar>
MixedChannelMeasurement<Scalar> to_mixed(const ChannelMeasurement<Scalar>& cm) {
  return MixedChannelMeasurement<Scalar>{cm.input.n, cm.input.ancilla_dim,
                                         cm.input.vector * cm.input.vector.adjoint(), cm.povm};
}

/// Embeds C^a into C^a_new (a <= a_new) on the ancilla factor. The POVM is
/// completed by adding I (x) P_perp to its first element.
template <typename Scalar>
MixedChannelMeasurement<Scalar> pad_ancilla(const MixedChannelMeasurement<Scalar>& mcm, int a_new) {
  if (a_new < mcm.ancilla_dim) throw DimensionMismatch("cannot shrink the ancilla");
  const Eigen::Index h = Eigen::Index(1) << mcm.n;
  const Eigen::Index a = mcm.ancilla_dim;
  CMatrix<Scalar> embed = CMatrix<Scalar>::Zero(h * a_new, h * a);
  for (Eigen::Index s = 0; s < h; ++s)
    for (Eigen::Index anc = 0; anc < a; ++anc) embed(s * a_new + anc, s * a + anc) = 1;
  MixedChannelMeasurement<Scalar> out{mcm.n, a_new, embed * mcm.rho * embed.adjoint(), {}};
  const CMatrix<Scalar> complement =
      CMatrix<Scalar>::Identity(h * a_new, h * a_new) - embed * embed.adjoint();
  for (std::size_t x = 0; x < mcm.povm.size(); ++x) {
    CMatrix<Scalar> m = embed * mcm.povm.elements[x] * embed.adjoint();
    if (x == 0) m += complement;
    out.povm.elements.push_back(std::move(m));
  }
  return out;
}

/// Single mixed-input measurement equivalent to a randomized strategy:
/// rho~ = sum_i q_i rho_i (x) |i><i| and M~(i, x) = M_i(x) (x) |i><i|, with the
/// flag register as the least significant ancilla factor. Outcomes are
/// ordered by component, then by the component's own outcome index.
template <typename Scalar>
MixedChannelMeasurement<Scalar> lift_mixture(const std::vector<Scalar>& weights,
                                             const std::vector<MixedChannelMeasurement<Scalar>>& parts) {
  using std::abs;
  if (parts.empty() || weights.size() != parts.size())
    throw PreconditionError("weights and components must be non-empty and of equal length");
  Scalar total = 0;
  for (Scalar q : weights) {
    if (q < Scalar(0)) throw PreconditionError("mixture weight is negative");
    total += q;
  }
  if (abs(total - Scalar(1)) > Scalar(1e-12)) throw PreconditionError("mixture weights do not sum to 1");
  const int n = parts.front().n;
  int a = 1;
  for (const auto& p : parts) {
    if (p.n != n) throw DimensionMismatch("mixture components have different copy counts");
    a = std::max(a, p.ancilla_dim);
  }
  const Eigen::Index m = static_cast<Eigen::Index>(parts.size());
  const Eigen::Index dim = (Eigen::Index(1) << n) * a * m;
  MixedChannelMeasurement<Scalar> out{n, static_cast<int>(a * m), CMatrix<Scalar>::Zero(dim, dim), {}};
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto padded = pad_ancilla(parts[i], a);
    CMatrix<Scalar> flag = CMatrix<Scalar>::Zero(m, m);
    flag(i, i) = 1;
    out.rho += weights[i] * kron(padded.rho, flag);
    for (const auto& e : padded.povm.elements) out.povm.elements.push_back(kron(e, flag));
  }
  return out;
}

}  // namespace su2est
