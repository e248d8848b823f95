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

// Pure-input channel measurements on (C^2)^(x)n (x) C^a: SLD vectors, the Z
// matrices, SLD and classical Fisher matrices, the projective measurement
// that attains the SLD matrix when Z is real, randomized strategies, locally
// unbiased estimators and Monte-Carlo sampling.
//
// State vectors index the system as the most significant factor:
// index = system_index * ancilla_dim + ancilla_index.

#pragma once

#include "su2est/collective.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace su2est {

template <typename Scalar = double>
struct InputState {
  int n = 1;
  int ancilla_dim = 1;
  CVector<Scalar> vector;

  Eigen::Index dim() const { return (Eigen::Index(1) << n) * ancilla_dim; }
};

template <typename Scalar = double>
struct SLDSet {
  /// psi_theta0 = (U_theta0^(x)n (x) I) psi.
  CVector<Scalar> psi_theta0;
  std::vector<CVector<Scalar>> l;
};

template <typename Scalar = double>
struct ZData {
  /// Z~_st = <X_s X_t> - <X_s><X_t> in psi_theta0, so that Z = K^-1 Z~ K^-T
  /// equals the Gram matrix [<l_i|l_j>].
  CMatrix<Scalar> Z_tilde;
  CMatrix<Scalar> Z;
  RMatrix<Scalar> J_S;
  Scalar max_imag = 0;
  bool achievable = false;
};

template <typename Scalar = double>
struct POVM {
  /// Outcome x is the index into elements.
  std::vector<CMatrix<Scalar>> elements;

  std::size_t size() const { return elements.size(); }
};

template <typename Scalar = double>
struct ChannelMeasurement {
  InputState<Scalar> input;
  POVM<Scalar> povm;
};

template <typename Scalar = double>
struct StrategyComponent {
  Scalar weight = 0;
  ChannelMeasurement<Scalar> measurement;
};

template <typename Scalar = double>
struct RandomizedStrategy {
  std::vector<StrategyComponent<Scalar>> components;
};

/// Outcome probabilities and their derivatives at theta0; dp(x, i) = d_i p(x).
template <typename Scalar = double>
struct OutcomeDistribution {
  RVector<Scalar> p;
  RMatrix<Scalar> dp;
};

/// Locally unbiased estimator: values.row(x) is theta-hat(x).
template <typename Scalar = double>
struct Estimator {
  RMatrix<Scalar> values;
};

template <typename Scalar = double>
struct SimulationResult {
  RVector<Scalar> mean;
  RMatrix<Scalar> cov;
};

template <typename Scalar>
InputState<Scalar> make_input_state(int n, int ancilla_dim, CVector<Scalar> vector) {
  using std::abs;
  if (n < 1 || ancilla_dim < 1) throw PreconditionError("n and ancilla dimension must be positive");
  InputState<Scalar> s{n, ancilla_dim, std::move(vector)};
  if (s.vector.size() != s.dim())
    throw DimensionMismatch("state vector length is not 2^n * ancilla_dim");
  if (abs(s.vector.norm() - Scalar(1)) > Scalar(1e-12)) throw NotAState("input vector is not unit norm");
  return s;
}

namespace detail {

/// (op (x) I_a) psi for a square op on the system factor.
template <typename Scalar>
CVector<Scalar> apply_system(const CMatrix<Scalar>& op, const CVector<Scalar>& psi,
                             int ancilla_dim) {
  const Eigen::Index sys = psi.size() / ancilla_dim;
  if (op.rows() != sys || op.cols() != sys)
    throw DimensionMismatch("operator does not match the system dimension");
  Eigen::Map<const CMatrix<Scalar>> m(psi.data(), ancilla_dim, sys);
  CMatrix<Scalar> out = m * op.transpose();
  return Eigen::Map<const CVector<Scalar>>(out.data(), out.size());
}

template <typename Scalar>
std::array<CMatrix<Scalar>, 3> collective_frame(const ObservableFrame<Scalar>& frame, int n) {
  return {collective_op(frame.X[0], n).matrix, collective_op(frame.X[1], n).matrix,
          collective_op(frame.X[2], n).matrix};
}

template <typename Scalar>
void check_frame(const ObservableFrame<Scalar>& frame, const UnitaryFamily<Scalar>& family) {
  if (frame.d != family.dim()) throw DimensionMismatch("frame and family dimensions disagree");
}

}  // namespace detail

/// (U_theta^(x)n (x) I_a) psi.
template <typename Scalar>
CVector<Scalar> evolved_state(const UnitaryFamily<Scalar>& family, const InputState<Scalar>& input,
                              const RVector<Scalar>& theta) {
  check_copy_count(input.n, kDefaultCopyCap);
  const CMatrix<Scalar> un = tensor_power(unitary(family, theta), input.n);
  return detail::apply_system(un, input.vector, input.ancilla_dim);
}

template <typename Scalar>
CVector<Scalar> evolved_state(const UnitaryFamily<Scalar>& family, const InputState<Scalar>& input) {
  return evolved_state(family, input, family.base_point);
}

/// l_i = i sum_j (K^-1)_ij (X_j^(n) (x) I - <X_j^(n) (x) I>) psi_theta0.
template <typename Scalar>
SLDSet<Scalar> sld_vectors(const ObservableFrame<Scalar>& frame, const UnitaryFamily<Scalar>& family,
                           const InputState<Scalar>& input) {
  using std::abs;
  detail::check_frame(frame, family);
  const int d = frame.d;
  SLDSet<Scalar> out;
  out.psi_theta0 = evolved_state(family, input);
  const auto xn = detail::collective_frame(frame, input.n);
  std::vector<CVector<Scalar>> centred;
  for (int j = 0; j < d; ++j) {
    CVector<Scalar> xpsi = detail::apply_system(xn[j], out.psi_theta0, input.ancilla_dim);
    const Scalar mean = out.psi_theta0.dot(xpsi).real();
    centred.push_back(xpsi - mean * out.psi_theta0);
  }
  const Complex<Scalar> i(0, 1);
  for (int a = 0; a < d; ++a) {
    CVector<Scalar> l = CVector<Scalar>::Zero(out.psi_theta0.size());
    for (int j = 0; j < d; ++j) l += frame.K_inv(a, j) * centred[j];
    l *= i;
    if (abs(out.psi_theta0.dot(l)) > Scalar(Tolerances::construction) * std::max(Scalar(1), l.norm()))
      throw Error("SLD vector is not orthogonal to the output state");
    out.l.push_back(std::move(l));
  }
  return out;
}

/// Z~, Z = K^-1 Z~ K^-T, J_S = Re Z and the achievability flag
/// (max |Im Z| <= tol).
template <typename Scalar>
ZData<Scalar> z_matrices(const ObservableFrame<Scalar>& frame, const UnitaryFamily<Scalar>& family,
                         const InputState<Scalar>& input,
                         Scalar tol = Scalar(Tolerances::achievable)) {
  detail::check_frame(frame, family);
  const int d = frame.d;
  const CVector<Scalar> psi0 = evolved_state(family, input);
  const auto xn = detail::collective_frame(frame, input.n);
  std::vector<CVector<Scalar>> xpsi;
  RVector<Scalar> mean(d);
  for (int j = 0; j < d; ++j) {
    xpsi.push_back(detail::apply_system(xn[j], psi0, input.ancilla_dim));
    mean(j) = psi0.dot(xpsi[j]).real();
  }
  ZData<Scalar> z;
  z.Z_tilde.resize(d, d);
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t) z.Z_tilde(s, t) = xpsi[s].dot(xpsi[t]) - mean(s) * mean(t);
  const CMatrix<Scalar> kinv = frame.K_inv.template cast<Complex<Scalar>>();
  z.Z = kinv * z.Z_tilde * kinv.transpose();
  z.J_S = z.Z.real();
  z.J_S = (z.J_S + z.J_S.transpose()).eval() / Scalar(2);
  z.max_imag = max_abs_imag(z.Z);
  z.achievable = z.max_imag <= tol;
  return z;
}

/// SLD Fisher matrix Re Z.
template <typename Scalar>
FisherMatrix<Scalar> sld_fisher(const ZData<Scalar>& z) {
  return z.J_S;
}

template <typename Scalar>
bool is_achievable(const ZData<Scalar>& z, Scalar tol = Scalar(Tolerances::achievable)) {
  return z.max_imag <= tol;
}

/// Throws InvalidPOVM unless the elements are PSD Hermitian and sum to I.
template <typename Scalar>
void validate_povm(const POVM<Scalar>& povm, Eigen::Index dim, Scalar tol = Scalar(1e-10)) {
  if (povm.elements.empty()) throw InvalidPOVM("POVM has no elements");
  CMatrix<Scalar> sum = CMatrix<Scalar>::Zero(dim, dim);
  for (const auto& m : povm.elements) {
    if (m.rows() != dim || m.cols() != dim) throw InvalidPOVM("POVM element has the wrong dimension");
    if (hermiticity_error(m) > tol) throw InvalidPOVM("POVM element is not Hermitian");
    if (min_eigenvalue(m) < -tol) throw InvalidPOVM("POVM element is not positive semidefinite");
    sum += m;
  }
  if ((sum - CMatrix<Scalar>::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol)
    throw InvalidPOVM("POVM elements do not sum to the identity");
}

/// Projective measurement whose classical Fisher matrix equals J_S for an
/// input with real Z. The span of {psi_theta0, l_1..l_d} is orthonormalised
/// with real coefficients, then reflected so that every basis vector has
/// overlap 1/sqrt(r+1) with psi_theta0. The final element I - sum f f^* has
/// probability zero.
template <typename Scalar>
POVM<Scalar> achieving_pvm(const ObservableFrame<Scalar>& frame, const UnitaryFamily<Scalar>& family,
                           const InputState<Scalar>& input,
                           Scalar tol = Scalar(Tolerances::achievable)) {
  using std::sqrt;
  const ZData<Scalar> z = z_matrices(frame, family, input, tol);
  if (!z.achievable) throw NotAchievable("Z has a non-vanishing imaginary part");
  const SLDSet<Scalar> sld = sld_vectors(frame, family, input);

  std::vector<CVector<Scalar>> v{sld.psi_theta0};
  for (const auto& l : sld.l) v.push_back(l);
  const Eigen::Index m = static_cast<Eigen::Index>(v.size());
  RMatrix<Scalar> gram(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) gram(a, b) = v[a].dot(v[b]).real();
  const Scalar scale = std::max(Scalar(1), gram.diagonal().maxCoeff());

  // Gram-Schmidt on coefficient vectors under the inner product x^T G y.
  std::vector<RVector<Scalar>> coeffs;
  for (Eigen::Index a = 0; a < m; ++a) {
    RVector<Scalar> c = RVector<Scalar>::Unit(m, a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : coeffs) c -= (u.dot(gram * c)) * u;
    const Scalar norm2 = c.dot(gram * c);
    if (norm2 <= Scalar(1e-9) * scale) continue;
    if (norm2 < Scalar(1e-7) * scale)
      throw RankDeficient("Gram matrix rank is numerically indeterminate");
    coeffs.push_back(c / sqrt(norm2));
  }
  const Eigen::Index r1 = static_cast<Eigen::Index>(coeffs.size());
  const Eigen::Index dim = input.dim();
  std::vector<CVector<Scalar>> u;
  for (const auto& c : coeffs) {
    CVector<Scalar> w = CVector<Scalar>::Zero(dim);
    for (Eigen::Index a = 0; a < m; ++a) w += c(a) * v[a];
    u.push_back(std::move(w));
  }

  // Householder reflection taking the first axis (psi_theta0) to the uniform vector.
  RVector<Scalar> h = RVector<Scalar>::Unit(r1, 0) -
                      RVector<Scalar>::Constant(r1, Scalar(1) / sqrt(Scalar(r1)));
  RMatrix<Scalar> reflect = RMatrix<Scalar>::Identity(r1, r1);
  if (h.norm() > Scalar(1e-15)) reflect -= Scalar(2) * h * h.transpose() / h.squaredNorm();

  POVM<Scalar> pvm;
  CMatrix<Scalar> rest = CMatrix<Scalar>::Identity(dim, dim);
  for (Eigen::Index k = 0; k < r1; ++k) {
    CVector<Scalar> f = CVector<Scalar>::Zero(dim);
    for (Eigen::Index j = 0; j < r1; ++j) f += reflect(k, j) * u[j];
    CMatrix<Scalar> proj = f * f.adjoint();
    rest -= proj;
    pvm.elements.push_back(std::move(proj));
  }
  pvm.elements.push_back((rest + rest.adjoint()) / Scalar(2));
  return pvm;
}

/// p(x) = <psi_theta|M_x|psi_theta> at an arbitrary theta.
template <typename Scalar>
RVector<Scalar> outcome_probabilities(const ChannelMeasurement<Scalar>& cm,
                                      const UnitaryFamily<Scalar>& family,
                                      const RVector<Scalar>& theta) {
  const CVector<Scalar> psi = evolved_state(family, cm.input, theta);
  RVector<Scalar> p(cm.povm.size());
  for (std::size_t x = 0; x < cm.povm.size(); ++x)
    p(static_cast<Eigen::Index>(x)) = psi.dot(cm.povm.elements[x] * psi).real();
  return p;
}

/// p(x) and d_i p(x) = Re <l_i|M_x|psi_theta0> at theta0.
template <typename Scalar>
OutcomeDistribution<Scalar> outcome_distribution(const ChannelMeasurement<Scalar>& cm,
                                                 const ObservableFrame<Scalar>& frame,
                                                 const UnitaryFamily<Scalar>& family) {
  validate_povm(cm.povm, cm.input.dim());
  const SLDSet<Scalar> sld = sld_vectors(frame, family, cm.input);
  const Eigen::Index outcomes = static_cast<Eigen::Index>(cm.povm.size());
  OutcomeDistribution<Scalar> dist{RVector<Scalar>(outcomes), RMatrix<Scalar>(outcomes, frame.d)};
  for (Eigen::Index x = 0; x < outcomes; ++x) {
    const CVector<Scalar> mpsi = cm.povm.elements[x] * sld.psi_theta0;
    dist.p(x) = sld.psi_theta0.dot(mpsi).real();
    if (dist.p(x) < Scalar(-1e-10)) throw InvalidPOVM("negative outcome probability");
    for (int i = 0; i < frame.d; ++i) dist.dp(x, i) = sld.l[i].dot(mpsi).real();
  }
  return dist;
}

/// F_ij = sum_x d_i p d_j p / p over outcomes with p >= floor.
template <typename Scalar>
FisherMatrix<Scalar> fisher_from_distribution(const OutcomeDistribution<Scalar>& dist,
                                              Scalar floor = Scalar(Tolerances::probability_floor)) {
  const Eigen::Index d = dist.dp.cols();
  FisherMatrix<Scalar> f = FisherMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index x = 0; x < dist.p.size(); ++x) {
    if (dist.p(x) < floor) continue;
    f += dist.dp.row(x).transpose() * dist.dp.row(x) / dist.p(x);
  }
  return f;
}

template <typename Scalar>
FisherMatrix<Scalar> classical_fisher(const ChannelMeasurement<Scalar>& cm,
                                      const ObservableFrame<Scalar>& frame,
                                      const UnitaryFamily<Scalar>& family) {
  return fisher_from_distribution(outcome_distribution(cm, frame, family));
}

template <typename Scalar>
void validate_strategy(const RandomizedStrategy<Scalar>& strategy) {
  using std::abs;
  if (strategy.components.empty()) throw PreconditionError("strategy has no components");
  Scalar total = 0;
  for (const auto& c : strategy.components) {
    if (c.weight < Scalar(0)) throw PreconditionError("strategy weight is negative");
    total += c.weight;
  }
  if (abs(total - Scalar(1)) > Scalar(1e-12)) throw PreconditionError("strategy weights do not sum to 1");
}

/// Outcome distribution of the randomized strategy over the disjoint union of
/// component outcome sets: q_i p_i(x) in component order.
template <typename Scalar>
OutcomeDistribution<Scalar> concatenated_distribution(const RandomizedStrategy<Scalar>& strategy,
                                                      const ObservableFrame<Scalar>& frame,
                                                      const UnitaryFamily<Scalar>& family) {
  validate_strategy(strategy);
  std::vector<OutcomeDistribution<Scalar>> parts;
  Eigen::Index total = 0;
  for (const auto& c : strategy.components) {
    parts.push_back(outcome_distribution(c.measurement, frame, family));
    total += parts.back().p.size();
  }
  OutcomeDistribution<Scalar> out{RVector<Scalar>(total), RMatrix<Scalar>(total, frame.d)};
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Scalar q = strategy.components[k].weight;
    const Eigen::Index len = parts[k].p.size();
    out.p.segment(offset, len) = q * parts[k].p;
    out.dp.middleRows(offset, len) = q * parts[k].dp;
    offset += len;
  }
  return out;
}

/// Fisher matrix of a randomized strategy, sum_i q_i F_i.
template <typename Scalar>
FisherMatrix<Scalar> mix(const RandomizedStrategy<Scalar>& strategy,
                         const ObservableFrame<Scalar>& frame, const UnitaryFamily<Scalar>& family) {
  validate_strategy(strategy);
  FisherMatrix<Scalar> f = FisherMatrix<Scalar>::Zero(frame.d, frame.d);
  for (const auto& c : strategy.components)
    f += c.weight * classical_fisher(c.measurement, frame, family);
  return f;
}

/// theta-hat(x) = theta0 + F^-1 dp(x) / p(x); theta0 on null outcomes.
template <typename Scalar>
Estimator<Scalar> unbiased_estimator(const ChannelMeasurement<Scalar>& cm,
                                     const FisherMatrix<Scalar>& fisher,
                                     const ObservableFrame<Scalar>& frame,
                                     const UnitaryFamily<Scalar>& family) {
  const Scalar scale = std::max(Scalar(1), fisher.cwiseAbs().maxCoeff());
  if (fisher.rows() != frame.d || min_eigenvalue(fisher) <= Scalar(1e-10) * scale)
    throw SingularFisher("Fisher matrix is not invertible");
  const RMatrix<Scalar> finv = fisher.inverse();
  const OutcomeDistribution<Scalar> dist = outcome_distribution(cm, frame, family);
  Estimator<Scalar> est{RMatrix<Scalar>(dist.p.size(), frame.d)};
  for (Eigen::Index x = 0; x < dist.p.size(); ++x) {
    est.values.row(x) = family.base_point.transpose();
    if (dist.p(x) >= Scalar(Tolerances::probability_floor))
      est.values.row(x) += (finv * dist.dp.row(x).transpose() / dist.p(x)).transpose();
  }
  return est;
}

/// Samples `shots` outcomes from p_theta_true and returns the empirical mean
/// and (1/N-normalised) covariance of the estimator. Sampling uses
/// std::mt19937_64 with 53-bit uniforms, so results are reproducible per seed.
template <typename Scalar>
SimulationResult<Scalar> simulate(const ChannelMeasurement<Scalar>& cm, const Estimator<Scalar>& est,
                                  const UnitaryFamily<Scalar>& family,
                                  const RVector<Scalar>& theta_true, std::int64_t shots,
                                  std::uint64_t seed) {
  if (shots < 1) throw PreconditionError("shots must be at least 1");
  RVector<Scalar> p = outcome_probabilities(cm, family, theta_true);
  if (p.size() != est.values.rows()) throw DimensionMismatch("estimator does not match the POVM");
  p = p.cwiseMax(Scalar(0));
  std::vector<double> cumulative(static_cast<std::size_t>(p.size()));
  double acc = 0;
  for (Eigen::Index x = 0; x < p.size(); ++x) {
    acc += static_cast<double>(p(x));
    cumulative[static_cast<std::size_t>(x)] = acc;
  }
  std::vector<std::int64_t> counts(cumulative.size(), 0);
  std::mt19937_64 rng(seed);
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
  const Eigen::Index d = est.values.cols();
  SimulationResult<Scalar> res{RVector<Scalar>::Zero(d), RMatrix<Scalar>::Zero(d, d)};
  const Scalar n = static_cast<Scalar>(shots);
  for (std::size_t x = 0; x < counts.size(); ++x)
    res.mean += Scalar(counts[x]) * est.values.row(static_cast<Eigen::Index>(x)).transpose();
  res.mean /= n;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    if (counts[x] == 0) continue;
    const RVector<Scalar> dev = est.values.row(static_cast<Eigen::Index>(x)).transpose() - res.mean;
    res.cov += Scalar(counts[x]) * dev * dev.transpose();
  }
  res.cov /= n;
  return res;
}

}  // namespace su2est
