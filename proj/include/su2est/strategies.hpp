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

// Input states and randomized strategies attaining the closed-form bounds.
// Every state is pre-rotated by (U_theta0^*)^(x)n so the channel output at
// theta0 is the frame-aligned state, and each component is paired with its
// achieving projective measurement.

#pragma once

#include "su2est/bounds.hpp"
#include "su2est/estimation.hpp"

#include <optional>
#include <vector>

namespace su2est {

template <typename Scalar = double>
struct StrategyReport {
  RandomizedStrategy<Scalar> strategy;
  std::vector<FisherMatrix<Scalar>> component_F;
  FisherMatrix<Scalar> achieved_F;
  std::optional<FisherMatrix<Scalar>> target_F;
  /// Tr W achieved_F^-1.
  Scalar weighted_trace = 0;
};

/// Frame whose O diagonalises W_tilde, as the weighted strategies require.
template <typename Scalar>
ObservableFrame<Scalar> weighted_frame(const WeightSpectrum<Scalar>& spec,
                                       const UnitaryFamily<Scalar>& family) {
  return observable_frame(channel_fisher(family), family, spec.O);
}

/// ((U_theta0^*)^(x)n (x) I) v as an input state.
template <typename Scalar>
InputState<Scalar> prerotated_input(const UnitaryFamily<Scalar>& family, int n, int ancilla_dim,
                                    const CVector<Scalar>& v) {
  const CMatrix<Scalar> rot = tensor_power(Matrix2c<Scalar>(unitary(family).adjoint()), n);
  return make_input_state(n, ancilla_dim, detail::apply_system(rot, v, ancilla_dim));
}

/// (e_axis^+ (x)n + e_axis^- (x)n) / sqrt 2, pre-rotated.
template <typename Scalar>
InputState<Scalar> cat_input(const ObservableFrame<Scalar>& frame,
                             const UnitaryFamily<Scalar>& family, int axis, int n) {
  const CVector<Scalar> v = (dicke(frame, axis, n, n).vector + dicke(frame, axis, n, 0).vector) /
                            std::sqrt(Scalar(2));
  return prerotated_input(family, n, 1, v);
}

template <typename Scalar>
StrategyComponent<Scalar> achieving_component(Scalar weight, const ObservableFrame<Scalar>& frame,
                                              const UnitaryFamily<Scalar>& family,
                                              InputState<Scalar> input) {
  POVM<Scalar> pvm = achieving_pvm(frame, family, input);
  return StrategyComponent<Scalar>{weight, ChannelMeasurement<Scalar>{std::move(input), std::move(pvm)}};
}

namespace detail {

template <typename Scalar>
StrategyReport<Scalar> finish_report(RandomizedStrategy<Scalar> strategy,
                                     const ObservableFrame<Scalar>& frame,
                                     const UnitaryFamily<Scalar>& family, const RMatrix<Scalar>& W,
                                     std::optional<FisherMatrix<Scalar>> target) {
  StrategyReport<Scalar> r;
  validate_strategy(strategy);
  r.achieved_F = FisherMatrix<Scalar>::Zero(frame.d, frame.d);
  for (const auto& c : strategy.components) {
    r.component_F.push_back(classical_fisher(c.measurement, frame, family));
    r.achieved_F += c.weight * r.component_F.back();
  }
  r.achieved_F = (r.achieved_F + r.achieved_F.transpose()).eval() / Scalar(2);
  r.weighted_trace = weighted_trace(W, r.achieved_F);
  r.target_F = std::move(target);
  r.strategy = std::move(strategy);
  return r;
}

template <typename Scalar>
void check_frame_matches(const WeightSpectrum<Scalar>& spec, const ObservableFrame<Scalar>& frame) {
  if (frame.O.rows() != spec.O.rows() ||
      (frame.O - spec.O).cwiseAbs().maxCoeff() > Scalar(1e-10))
    throw PreconditionError("frame O must equal the weight spectrum's O (see weighted_frame)");
}

}  // namespace detail

/// Input whose achieving measurement gives F = n^2 J: the cat state for
/// d = 1, the maximally entangled state with a qubit ancilla for n = 1, and
/// the symmetric single-excitation state along X_3 for d = 2, n = 2.
template <typename Scalar>
InputState<Scalar> saturating_input(const ObservableFrame<Scalar>& frame,
                                    const UnitaryFamily<Scalar>& family, int n, int d) {
  check_copy_count(n, kDefaultCopyCap);
  if (d != frame.d || d != family.dim()) throw DimensionMismatch("d does not match the frame");
  if (d == 1) return cat_input(frame, family, 0, n);
  if (n == 1) {
    CVector<Scalar> v = CVector<Scalar>::Zero(4);
    v(0) = v(3) = Scalar(1) / std::sqrt(Scalar(2));
    return make_input_state(1, 2, v);
  }
  if (d == 2 && n == 2) return prerotated_input(family, 2, 1, dicke(frame, 2, 2, 1).vector);
  throw NotSaturable("n^2 J is not attainable when (d - 1) n > 2");
}

/// Mixture of the three cat states with weights
/// s_i = ((n + 2) sqrt(w_i) / sum sqrt(w) - 1) / (n - 1). Requires
/// n >= max(3, (sqrt(w_2) + sqrt(w_3)) / sqrt(w_1) - 1).
template <typename Scalar>
StrategyReport<Scalar> optimal_strategy_d3(const WeightSpectrum<Scalar>& spec,
                                           const ObservableFrame<Scalar>& frame,
                                           const UnitaryFamily<Scalar>& family, int n) {
  if (spec.dim() != 3 || frame.d != 3) throw DimensionMismatch("optimal_strategy_d3 needs d = 3");
  detail::check_frame_matches(spec, frame);
  check_copy_count(n, kDefaultCopyCap);
  const RVector<Scalar> sw = spec.w.cwiseSqrt();
  const Scalar threshold = (sw(1) + sw(2)) / sw(0) - Scalar(1);
  if (n < 3 || Scalar(n) + Scalar(1e-12) < threshold)
    throw ConditionViolated("need n >= max(3, (sqrt w2 + sqrt w3) / sqrt w1 - 1) = " +
                            std::to_string(std::max(Scalar(3), threshold)));
  const Scalar tr = sw.sum();
  RandomizedStrategy<Scalar> strategy;
  for (int i = 0; i < 3; ++i) {
    Scalar s = (Scalar(n + 2) * sw(i) / tr - Scalar(1)) / Scalar(n - 1);
    if (s < Scalar(0)) s = Scalar(0);
    strategy.components.push_back(achieving_component(s, frame, family, cat_input(frame, family, i, n)));
  }
  return detail::finish_report(std::move(strategy), frame, family, spec.W,
                               std::optional<FisherMatrix<Scalar>>(optimal_fisher(spec, n, 3)));
}

/// d = 3, n = 2: mixture of the single-excitation Dicke states along each
/// axis. Regime 1 uses s_i = 1 - 2 sqrt(w_i) / sum sqrt(w); regime 2 uses
/// (sqrt w_2, sqrt w_1, 0) / (sqrt w_1 + sqrt w_2).
template <typename Scalar>
StrategyReport<Scalar> strategy_d3_n2(const WeightSpectrum<Scalar>& spec,
                                      const ObservableFrame<Scalar>& frame,
                                      const UnitaryFamily<Scalar>& family) {
  if (spec.dim() != 3 || frame.d != 3) throw DimensionMismatch("strategy_d3_n2 needs d = 3");
  detail::check_frame_matches(spec, frame);
  const RVector<Scalar> sw = spec.w.cwiseSqrt();
  const Scalar tr = sw.sum();
  const BoundReport<Scalar> bound = gm_bound(spec, 2, 3);
  std::array<Scalar, 3> s{};
  if (bound.regime == Regime::d3_n2_regime1) {
    for (int i = 0; i < 3; ++i) s[i] = std::max(Scalar(0), Scalar(1) - Scalar(2) * sw(i) / tr);
  } else {
    s = {sw(1) / (sw(0) + sw(1)), sw(0) / (sw(0) + sw(1)), Scalar(0)};
  }
  RandomizedStrategy<Scalar> strategy;
  for (int i = 0; i < 3; ++i)
    strategy.components.push_back(achieving_component(
        s[i], frame, family, prerotated_input(family, 2, 1, dicke(frame, i, 2, 1).vector)));
  return detail::finish_report(std::move(strategy), frame, family, spec.W, bound.optimal_F);
}

/// d = 2: the half-filled Dicke state along X_3 for even n; for odd n the
/// superposition of the two central Dicke states tagged by a qubit ancilla.
template <typename Scalar>
InputState<Scalar> optimal_input_d2(const ObservableFrame<Scalar>& frame,
                                    const UnitaryFamily<Scalar>& family, int n) {
  if (frame.d != 2) throw DimensionMismatch("optimal_input_d2 needs d = 2");
  check_copy_count(n, kDefaultCopyCap);
  if (n % 2 == 0) return prerotated_input(family, n, 1, dicke(frame, 2, n, n / 2).vector);
  CVector<Scalar> a_plus = CVector<Scalar>::Unit(2, 0);
  CVector<Scalar> a_minus = CVector<Scalar>::Unit(2, 1);
  const CVector<Scalar> v = (kron_vec(dicke(frame, 2, n, (n + 1) / 2).vector, a_plus) +
                             kron_vec(dicke(frame, 2, n, (n - 1) / 2).vector, a_minus)) /
                            std::sqrt(Scalar(2));
  return prerotated_input(family, n, 2, v);
}

/// d = 2, n >= 3: mixture of the two cat states along X_1, X_2 with weights
/// proportional to sqrt(w_i). Approaches the bound as n grows.
template <typename Scalar>
StrategyReport<Scalar> asymptotic_strategy_d2(const WeightSpectrum<Scalar>& spec,
                                              const ObservableFrame<Scalar>& frame,
                                              const UnitaryFamily<Scalar>& family, int n) {
  if (spec.dim() != 2 || frame.d != 2) throw DimensionMismatch("asymptotic_strategy_d2 needs d = 2");
  detail::check_frame_matches(spec, frame);
  check_copy_count(n, kDefaultCopyCap);
  if (n < 3) throw PreconditionError("asymptotic strategy needs n >= 3");
  const RVector<Scalar> sw = spec.w.cwiseSqrt();
  RandomizedStrategy<Scalar> strategy;
  for (int i = 0; i < 2; ++i)
    strategy.components.push_back(
        achieving_component(sw(i) / sw.sum(), frame, family, cat_input(frame, family, i, n)));
  return detail::finish_report(std::move(strategy), frame, family, spec.W,
                               std::optional<FisherMatrix<Scalar>>());
}

}  // namespace su2est
