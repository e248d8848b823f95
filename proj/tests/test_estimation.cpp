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

#include "oracles.hpp"
#include "su2est/bounds.hpp"
#include "su2est/estimation.hpp"
#include "su2est/strategies.hpp"

#include <gtest/gtest.h>

namespace {

using namespace su2est;
using oracle::vec;

struct Setup {
  UnitaryFamily<double> fam;
  ObservableFrame<double> frame;
  RMatrix<double> J;
};

Setup setup(int d, RVector<double> th) {
  auto fam = pauli_family<double>(d, std::move(th));
  const auto cf = channel_fisher(fam);
  return Setup{fam, observable_frame(cf, fam), cf.J};
}

CVector<double> me_vector() {
  CVector<double> v = CVector<double>::Zero(4);
  v(0) = v(3) = 1 / std::sqrt(2.0);
  return v;
}

TEST(InputState, Validation) {
  EXPECT_THROW(make_input_state(1, 1, CVector<double>(CVector<double>::Ones(2))), NotAState);
  EXPECT_THROW(make_input_state(2, 1, CVector<double>(CVector<double>::Unit(2, 0))), DimensionMismatch);
  EXPECT_THROW(make_input_state(0, 1, CVector<double>(CVector<double>::Unit(1, 0))), PreconditionError);
  EXPECT_NO_THROW(make_input_state(1, 2, me_vector()));
}

TEST(Evolution, MatchesOracle) {
  std::mt19937_64 rng(21);
  const auto s = setup(3, vec({0.3, -0.5, 0.8}));
  for (int n = 1; n <= 4; ++n) {
    const auto in = make_input_state(n, 2, oracle::random_state(Eigen::Index(2) << n, rng));
    const RVector<double> th = vec({-0.2, 0.6, 0.1});
    EXPECT_LT((evolved_state(s.fam, in, th) - oracle::evolve(s.fam, th, in.vector, n, 2)).norm(), 1e-12);
  }
}

TEST(ZMatrices, MaximallyEntangledGivesJ) {
  const auto s = setup(3, vec({0.3, -0.2, 0.5}));
  const auto z = z_matrices(s.frame, s.fam, make_input_state(1, 2, me_vector()));
  EXPECT_TRUE(z.achievable);
  EXPECT_LT(z.max_imag, 1e-12);
  EXPECT_LT(oracle::max_abs(z.J_S - s.J), 1e-10);
  EXPECT_LT((z.Z_tilde - CMatrix<double>::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ZMatrices, MatchesDirectInnerProducts) {
  std::mt19937_64 rng(22);
  const auto s = setup(3, vec({0.1, 0.4, -0.3}));
  for (int n = 1; n <= 3; ++n) {
    const auto in = make_input_state(n, 2, oracle::random_state(Eigen::Index(2) << n, rng));
    const auto z = z_matrices(s.frame, s.fam, in);
    std::vector<CMatrix<double>> xs;
    for (int j = 0; j < 3; ++j) xs.push_back(oracle::collective(s.frame.X[j], n));
    const CVector<double> psi = oracle::evolve(s.fam, s.fam.base_point, in.vector, n, 2);
    const CMatrix<double> ref = oracle::z_tilde(xs, psi, 2);
    EXPECT_LT((z.Z_tilde - ref).cwiseAbs().maxCoeff(), 1e-11);
    // Z is the Gram matrix of the SLD vectors.
    const auto sld = sld_vectors(s.frame, s.fam, in);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_LT(std::abs(z.Z(a, b) - sld.l[a].dot(sld.l[b])), 1e-11);
    // J_S is symmetric positive semidefinite and obeys the matrix inequality.
    EXPECT_LT(oracle::max_abs(z.J_S - z.J_S.transpose()), 1e-14);
    EXPECT_GT(min_eigenvalue(z.J_S), -1e-10);
    EXPECT_TRUE(check_matrix_inequality(z.J_S, s.J, n));
  }
}

TEST(ZMatrices, ProductOfEigenstatesIsNotAchievable) {
  // e_1^+ (x) e_1^+ rotated: Z picks up the imaginary commutator term.
  const auto s = setup(3, vec({0.0, 0.0, 0.0}));
  CVector<double> plus = CVector<double>::Zero(4);
  plus(0) = 1;  // |00> is an X_3 eigenstate at theta0 = 0
  const auto z = z_matrices(s.frame, s.fam, make_input_state(2, 1, plus));
  EXPECT_FALSE(z.achievable);
  EXPECT_THROW(achieving_pvm(s.frame, s.fam, make_input_state(2, 1, plus)), NotAchievable);
}

TEST(AchievingPvm, ReachesSldFisherAndMatchesFiniteDifferences) {
  const auto s = setup(3, vec({0.3, -0.2, 0.5}));
  const auto in = make_input_state(1, 2, me_vector());
  const ChannelMeasurement<double> cm{in, achieving_pvm(s.frame, s.fam, in)};
  EXPECT_NO_THROW(validate_povm(cm.povm, in.dim()));
  EXPECT_EQ(cm.povm.size(), 5u);
  const auto F = classical_fisher(cm, s.frame, s.fam);
  EXPECT_LT(oracle::max_abs(F - s.J), 1e-10);
  EXPECT_LT(oracle::max_abs(F - oracle::fd_classical_fisher(cm, s.fam)), 1e-7);
  // Each projector is rank one and the residual element has probability 0.
  const RVector<double> p = outcome_probabilities(cm, s.fam, s.fam.base_point);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(p(k), 0.25, 1e-12);
  EXPECT_NEAR(p(4), 0.0, 1e-12);
}

TEST(AchievingPvm, CatStatesAlongEachAxis) {
  const auto s = setup(3, vec({0.2, 0.1, -0.4}));
  for (int n = 2; n <= 5; ++n) {
    for (int axis = 0; axis < 3; ++axis) {
      const auto in = cat_input(s.frame, s.fam, axis, n);
      const auto z = z_matrices(s.frame, s.fam, in);
      ASSERT_TRUE(z.achievable);
      const ChannelMeasurement<double> cm{in, achieving_pvm(s.frame, s.fam, in)};
      const auto F = classical_fisher(cm, s.frame, s.fam);
      EXPECT_LT(oracle::max_abs(F - z.J_S), 1e-9);
      // Frame coordinates: n^2 on the cat axis. For n >= 3 the other two
      // diagonal entries are n; at n = 2 a two-site flip mixes them.
      const RMatrix<double> Ft = s.frame.K * F * s.frame.K.transpose();
      EXPECT_NEAR(Ft(axis, axis), n * n, 1e-9);
      for (int i = 0; i < 3; ++i)
        if (n >= 3 && i != axis) EXPECT_NEAR(Ft(i, i), n, 1e-9);
      EXPECT_NEAR(fisher_trace(F, s.J), n * n + 2 * n, 1e-9);
    }
  }
}

TEST(ClassicalFisher, BoundedBySldFisherForRandomMeasurements) {
  std::mt19937_64 rng(23);
  const auto s = setup(3, vec({0.5, -0.1, 0.2}));
  for (int trial = 0; trial < 10; ++trial) {
    const auto in = make_input_state(1, 2, oracle::random_state(4, rng));
    // Projective measurement in a random orthonormal basis.
    CMatrix<double> g(4, 4);
    for (int c = 0; c < 4; ++c) g.col(c) = oracle::random_state(4, rng);
    Eigen::HouseholderQR<CMatrix<double>> qr(g);
    const CMatrix<double> q = qr.householderQ();
    POVM<double> povm;
    for (int c = 0; c < 4; ++c) povm.elements.push_back(q.col(c) * q.col(c).adjoint());
    const ChannelMeasurement<double> cm{in, povm};
    const auto F = classical_fisher(cm, s.frame, s.fam);
    const auto z = z_matrices(s.frame, s.fam, in);
    EXPECT_GT(min_eigenvalue(RMatrix<double>(z.J_S - F)), -1e-10);
    EXPECT_LT(oracle::max_abs(F - oracle::fd_classical_fisher(cm, s.fam)), 1e-7);
    EXPECT_TRUE(check_matrix_inequality(F, s.J, 1));
  }
}

TEST(Povm, Validation) {
  POVM<double> bad{{CMatrix<double>(CMatrix<double>::Identity(2, 2) * 0.5)}};
  EXPECT_THROW(validate_povm(bad, 2), InvalidPOVM);
  CMatrix<double> neg = CMatrix<double>::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = 1.0;
  CMatrix<double> rest = CMatrix<double>::Identity(2, 2) - neg;
  EXPECT_THROW(validate_povm(POVM<double>{{neg, rest}}, 2), InvalidPOVM);
  EXPECT_THROW(validate_povm(POVM<double>{}, 2), InvalidPOVM);
}

TEST(Mixture, FisherIsAdditive) {
  const auto s = setup(3, vec({0.3, -0.2, 0.5}));
  RandomizedStrategy<double> strat;
  strat.components.push_back(achieving_component(0.2, s.frame, s.fam, cat_input(s.frame, s.fam, 0, 3)));
  strat.components.push_back(achieving_component(0.5, s.frame, s.fam, cat_input(s.frame, s.fam, 1, 3)));
  strat.components.push_back(achieving_component(0.3, s.frame, s.fam, cat_input(s.frame, s.fam, 2, 3)));
  const auto dist = concatenated_distribution(strat, s.frame, s.fam);
  EXPECT_NEAR(dist.p.sum(), 1.0, 1e-12);
  EXPECT_LT(oracle::max_abs(mix(strat, s.frame, s.fam) - fisher_from_distribution(dist)), 1e-12);

  strat.components[0].weight = 0.3;
  EXPECT_THROW(validate_strategy(strat), PreconditionError);
}

TEST(Estimator, LocallyUnbiased) {
  const auto s = setup(3, vec({0.3, -0.2, 0.5}));
  const auto in = make_input_state(1, 2, me_vector());
  const ChannelMeasurement<double> cm{in, achieving_pvm(s.frame, s.fam, in)};
  const auto F = classical_fisher(cm, s.frame, s.fam);
  const auto est = unbiased_estimator(cm, F, s.frame, s.fam);
  const auto dist = outcome_distribution(cm, s.frame, s.fam);
  // E[theta-hat] = theta0 and d_j E[theta-hat_i] = delta_ij at theta0.
  const RVector<double> mean = est.values.transpose() * dist.p;
  EXPECT_LT((mean - s.fam.base_point).cwiseAbs().maxCoeff(), 1e-12);
  const RMatrix<double> grad = est.values.transpose() * dist.dp;
  EXPECT_LT(oracle::max_abs(grad - RMatrix<double>::Identity(3, 3)), 1e-10);
  // Exact covariance equals F^-1.
  RMatrix<double> cov = RMatrix<double>::Zero(3, 3);
  for (Eigen::Index x = 0; x < dist.p.size(); ++x) {
    const RVector<double> dev = est.values.row(x).transpose() - s.fam.base_point;
    cov += dist.p(x) * dev * dev.transpose();
  }
  EXPECT_LT(oracle::max_abs(cov - F.inverse()), 1e-10);
}

TEST(Estimator, SingularFisherThrows) {
  const auto s = setup(3, vec({0.3, -0.2, 0.5}));
  const auto in = make_input_state(1, 2, me_vector());
  const ChannelMeasurement<double> cm{in, achieving_pvm(s.frame, s.fam, in)};
  EXPECT_THROW(unbiased_estimator(cm, RMatrix<double>(RMatrix<double>::Zero(3, 3)), s.frame, s.fam),
               SingularFisher);
}

TEST(Simulate, DeterministicAndDegenerateCases) {
  const auto s = setup(3, vec({0.0, 0.0, 0.0}));
  const auto in = make_input_state(1, 2, me_vector());
  const ChannelMeasurement<double> cm{in, achieving_pvm(s.frame, s.fam, in)};
  const auto est = unbiased_estimator(cm, classical_fisher(cm, s.frame, s.fam), s.frame, s.fam);
  const auto a = simulate(cm, est, s.fam, s.fam.base_point, 10000, 42);
  const auto b = simulate(cm, est, s.fam, s.fam.base_point, 10000, 42);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.cov, b.cov);
  const auto c = simulate(cm, est, s.fam, s.fam.base_point, 10000, 43);
  EXPECT_NE(a.cov, c.cov);
  const auto one = simulate(cm, est, s.fam, s.fam.base_point, 1, 7);
  EXPECT_EQ(one.cov, RMatrix<double>(RMatrix<double>::Zero(3, 3)));
  EXPECT_THROW(simulate(cm, est, s.fam, s.fam.base_point, 0, 7), PreconditionError);
}

TEST(Simulate, CovarianceApproachesInverseFisher) {
  const auto s = setup(3, vec({0.0, 0.0, 0.0}));
  const auto in = make_input_state(1, 2, me_vector());
  const ChannelMeasurement<double> cm{in, achieving_pvm(s.frame, s.fam, in)};
  const auto F = classical_fisher(cm, s.frame, s.fam);
  const auto est = unbiased_estimator(cm, F, s.frame, s.fam);
  const std::int64_t shots = 200000;
  const auto r = simulate(cm, est, s.fam, s.fam.base_point, shots, 2026);
  const auto dist = outcome_distribution(cm, s.frame, s.fam);
  const RMatrix<double> finv = F.inverse();
  // Second moment about theta0; its standard error follows from the exact
  // distribution. The sample-mean covariance differs from it by delta delta^T.
  const RVector<double> delta = r.mean - s.fam.base_point;
  const RMatrix<double> second = r.cov + delta * delta.transpose();
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(delta(i)), 5 * std::sqrt(finv(i, i) / double(shots)));
    for (int j = 0; j < 3; ++j) {
      double m4 = 0;
      for (Eigen::Index x = 0; x < dist.p.size(); ++x) {
        const double ai = est.values(x, i) - s.fam.base_point(i);
        const double aj = est.values(x, j) - s.fam.base_point(j);
        m4 += dist.p(x) * ai * ai * aj * aj;
      }
      const double se = std::sqrt((m4 - finv(i, j) * finv(i, j)) / double(shots));
      // 1e-9 absorbs summation round-off where the estimator has |a_i| fixed.
      EXPECT_LT(std::abs(second(i, j) - finv(i, j)), 5 * se + 1e-9) << i << "," << j;
    }
  }
}

}  // namespace
