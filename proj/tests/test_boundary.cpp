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
#include "su2est/boundary.hpp"

#include <gtest/gtest.h>

namespace {

using namespace su2est;
using oracle::vec;

ObservableFrame<double> identity_frame() {
  const auto fam = pauli_family<double>(3, vec({0.0, 0.0, 0.0}));
  return observable_frame(channel_fisher(fam), fam);
}

TEST(Grid, Endpoints) {
  EXPECT_EQ(t_grid(1), (std::vector<double>{0.0, 1.0}));
  const auto g = t_grid(5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g[2], 0.5);
  EXPECT_EQ(g.back(), 1.0);
}

TEST(Trace, KnownEndpoints) {
  const auto frame = identity_frame();
  const auto pts = trace_boundary(frame, 3, 0, {0.0, 1.0});
  ASSERT_EQ(pts.size(), 2u);
  // t = 0 maximises X_3^2: the cat state along X_3.
  EXPECT_LT((pts[0].diag - Eigen::Vector3d(3, 3, 9)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(pts[1].diag(1), 9.0, 1e-9);
  for (const auto& p : pts) EXPECT_TRUE(p.achievable);
}

class TraceProperties : public ::testing::TestWithParam<int> {};

TEST_P(TraceProperties, SupportAndTrace) {
  const int n = GetParam();
  const auto frame = identity_frame();
  const auto pts = trace_all_axes(frame, n, t_grid(21));
  ASSERT_EQ(pts.size(), 63u);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const bool ordered = pts[k - 1].axis < pts[k].axis ||
                         (pts[k - 1].axis == pts[k].axis && pts[k - 1].t <= pts[k].t);
    EXPECT_TRUE(ordered);
  }
  for (const auto& p : pts) {
    ASSERT_TRUE(p.achievable) << "axis=" << p.axis << " t=" << p.t;
    EXPECT_NEAR(p.diag.sum(), n * n + 2 * n, 1e-6);
    // The point attains the support value t F_pp + (1 - t) F_qq = max_eig.
    const int q1 = (p.axis + 1) % 3, q2 = (p.axis + 2) % 3;
    EXPECT_NEAR(p.t * p.diag(q1) + (1 - p.t) * p.diag(q2), p.max_eig, 1e-8);
    // F is a Fisher matrix of an achievable state: PSD and below n^2 I.
    EXPECT_GT(min_eigenvalue(p.F), -1e-9);
    EXPECT_LT(max_eigenvalue(p.F), n * n + 1e-9);
    EXPECT_LE(p.residual_im, 1e-7);
    EXPECT_LE(p.mean_residual, 1e-7);
  }
}

INSTANTIATE_TEST_SUITE_P(SmallN, TraceProperties, ::testing::Values(2, 3, 4));

TEST(Trace, Deterministic) {
  const auto frame = identity_frame();
  const auto a = trace_boundary(frame, 3, 1, t_grid(7));
  const auto b = trace_boundary(frame, 3, 1, t_grid(7));
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].F, b[k].F);
}

TEST(Trace, Preconditions) {
  const auto frame = identity_frame();
  EXPECT_THROW(trace_boundary(frame, 3, 3, {0.5}), IndexError);
  EXPECT_THROW(trace_boundary(frame, 3, 0, {1.5}), PreconditionError);
  EXPECT_THROW(trace_boundary(frame, 9, 0, {0.5}), SizeLimit);
  const auto f2 = pauli_family<double>(2, vec({0.0, 0.0}));
  EXPECT_THROW(trace_boundary(observable_frame(channel_fisher(f2), f2), 2, 0, {0.5}), DimensionMismatch);
  const auto off = pauli_family<double>(3, vec({0.9, 0.4, 0.2}));
  EXPECT_THROW(trace_boundary(observable_frame(channel_fisher(off), off), 2, 0, {0.5}), PreconditionError);
}

TEST(Triangles, Vertices) {
  const auto in3 = inner_polytope(3);
  EXPECT_EQ(in3[0], Eigen::Vector3d(9, 3, 3));
  const auto in2 = inner_polytope(2);
  EXPECT_EQ(in2[1], Eigen::Vector3d(4, 0, 4));
  const auto d2 = d2_optimum_points(3);
  EXPECT_EQ(d2[2], Eigen::Vector3d(7, 7, 0));
  EXPECT_THROW(inner_polytope(1), PreconditionError);
}

TEST(Geometry, Barycentric) {
  const int n = 2;
  const double s = 8;
  EXPECT_LT((barycentric({s, 0, 0}, n) - Eigen::Vector2d(0, 0)).norm(), 1e-15);
  EXPECT_LT((barycentric({0, s, 0}, n) - Eigen::Vector2d(1, 0)).norm(), 1e-15);
  EXPECT_LT((barycentric({0, 0, s}, n) - Eigen::Vector2d(0.5, std::sqrt(3.0) / 2)).norm(), 1e-15);
}

TEST(Geometry, HullAndDistances) {
  std::vector<Eigen::Vector2d> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}};
  const auto hull = convex_hull(pts);
  EXPECT_EQ(hull.size(), 4u);
  EXPECT_EQ(polygon_distance({0.5, 0.5}, hull), 0.0);
  EXPECT_NEAR(polygon_distance({2, 0.5}, hull), 1.0, 1e-15);
  EXPECT_NEAR(segment_distance({0, 1}, {0, 0}, {2, 0}), 1.0, 1e-15);
  const std::vector<Eigen::Vector2d> shifted{{0, 0}, {1, 0}, {1, 1.25}, {0, 1.25}};
  EXPECT_NEAR(hausdorff_convex(hull, shifted), 0.25, 1e-15);

  const std::array<Eigen::Vector2d, 3> tri{Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0), Eigen::Vector2d(0, 2)};
  const Eigen::Vector2d c(0.5, 0.5);
  EXPECT_NEAR(triangle_radius(tri, c, {0.5, 0.0}), 0.5, 1e-15);
  EXPECT_NEAR(triangle_radius(tri, c, {1.0, 1.0}), std::sqrt(0.5), 1e-12);
}

TEST(Geometry, TwoCopyBoundaryIsTheTriangle) {
  const int n = 2;
  const auto pts = trace_all_axes(identity_frame(), n, t_grid(41));
  std::vector<Eigen::Vector2d> traced;
  for (const auto& p : pts) traced.push_back(barycentric(p.diag, n));
  std::vector<Eigen::Vector2d> tri;
  for (const auto& v : inner_polytope(n)) tri.push_back(barycentric(v, n));
  EXPECT_LE(hausdorff_convex(convex_hull(traced), convex_hull(tri)), 1e-4);
}

}  // namespace
