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

// Numerical boundary of the diagonal slice of the n-copy Fisher-matrix set
// for the three-parameter model with J = I. For axis 3 the support direction
// is H_t = t X_1^(n)^2 + (1 - t) X_2^(n)^2 (axes 1 and 2 by cyclic shift);
// the top eigenvector of H_t (x) I_2 gives a boundary point once its first
// moments vanish and its second-moment matrix is real.
//
// Also holds the planar geometry used to compare traced curves with the
// inner triangle: the barycentric map of the plane sum(diag) = n^2 + 2n,
// convex hulls and Hausdorff distances.

#pragma once

#include "su2est/bounds.hpp"
#include "su2est/collective.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace su2est {

template <typename Scalar = double>
struct BoundaryPoint {
  int axis = 0;  // 0-based
  Scalar t = 0;
  RMatrix<Scalar> F;
  Eigen::Matrix<Scalar, 3, 1> diag;
  /// Top eigenvalue of H_t on the system.
  Scalar max_eig = 0;
  bool achievable = false;
  /// max |Im <X_i X_j>| over i, j.
  Scalar residual_im = 0;
  /// max |<X_i>| over i.
  Scalar mean_residual = 0;
};

struct BoundaryOptions {
  double accept_tol = 1e-7;
  int random_starts = 8;
  int max_iterations = 400;
  std::uint64_t seed = 0x5eed;
};

/// {0, 1} for steps <= 1, otherwise steps equally spaced points in [0, 1].
inline std::vector<double> t_grid(int steps) {
  if (steps <= 1) return {0.0, 1.0};
  std::vector<double> g(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) g[static_cast<std::size_t>(k)] = double(k) / double(steps - 1);
  g.back() = 1.0;
  return g;
}

namespace detail {

/// Operators whose expectations must vanish at an admissible point,
/// compressed to the top eigenspace basis B: the three first moments and
/// Im <X_i X_j> for i < j.
template <typename Scalar>
std::vector<CMatrix<Scalar>> residual_operators(const std::array<CMatrix<Scalar>, 3>& x,
                                                const CMatrix<Scalar>& basis) {
  std::vector<CMatrix<Scalar>> r;
  for (int k = 0; k < 3; ++k) r.push_back(basis.adjoint() * x[k] * basis);
  const Complex<Scalar> two_i(0, 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const CMatrix<Scalar> q = basis.adjoint() * x[i] * x[j] * basis;
      r.push_back((q - q.adjoint()) / two_i);
    }
  }
  return r;
}

template <typename Scalar>
Scalar residual_objective(const std::vector<CMatrix<Scalar>>& r, const CVector<Scalar>& c) {
  Scalar f = 0;
  for (const auto& op : r) {
    const Scalar g = c.dot(op * c).real();
    f += g * g;
  }
  return f;
}

/// Riemannian gradient descent of sum_r <c|R_r|c>^2 on the unit sphere.
template <typename Scalar>
CVector<Scalar> descend(const std::vector<CMatrix<Scalar>>& r, CVector<Scalar> c, int iterations) {
  Scalar f = residual_objective(r, c);
  Scalar step = 0.1;
  for (int it = 0; it < iterations && f > Scalar(1e-24); ++it) {
    CVector<Scalar> grad = CVector<Scalar>::Zero(c.size());
    for (const auto& op : r) {
      const CVector<Scalar> oc = op * c;
      grad += Scalar(4) * c.dot(oc).real() * oc;
    }
    grad -= c.dot(grad).real() * c;
    if (grad.norm() < Scalar(1e-18)) break;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      CVector<Scalar> trial = (c - step * grad).normalized();
      const Scalar ft = residual_objective(r, trial);
      if (ft < f) {
        c = trial;
        f = ft;
        step *= Scalar(2);
        moved = true;
        break;
      }
      step /= Scalar(2);
    }
    if (!moved) break;
  }
  return c;
}

}  // namespace detail

/// Traces one axis of the boundary. The frame must come from a
/// three-parameter family with J = I (K K^T = I). Points whose top eigenspace
/// holds no vector passing the checks are returned with achievable = false.
template <typename Scalar>
std::vector<BoundaryPoint<Scalar>> trace_boundary(const ObservableFrame<Scalar>& frame, int n,
                                                  int axis, const std::vector<double>& grid,
                                                  const BoundaryOptions& opt = {}) {
  using std::abs;
  if (frame.d != 3) throw DimensionMismatch("boundary tracing needs d = 3");
  if (!is_orthogonal(frame.K, Scalar(1e-9))) throw PreconditionError("boundary tracing needs J = I");
  if (axis < 0 || axis > 2) throw IndexError("axis must be 0, 1 or 2");
  check_copy_count(n, kDefaultCopyCap);
  for (double t : grid)
    if (t < 0.0 || t > 1.0) throw PreconditionError("t grid must lie in [0, 1]");

  const Eigen::Index sys = Eigen::Index(1) << n;
  const CMatrix<Scalar> eye2 = CMatrix<Scalar>::Identity(2, 2);
  std::array<CMatrix<Scalar>, 3> xs;
  std::array<CMatrix<Scalar>, 3> xa;
  for (int k = 0; k < 3; ++k) {
    xs[k] = collective_op(frame.X[k], n).matrix;
    xa[k] = kron(xs[k], eye2);
  }
  // Axis a weights X_{a+1}^2 by t and X_{a+2}^2 by 1 - t (indices mod 3).
  const int p = (axis + 1) % 3;
  const int q = (axis + 2) % 3;
  const CMatrix<Scalar> sp = xs[p] * xs[p];
  const CMatrix<Scalar> sq = xs[q] * xs[q];

  std::vector<BoundaryPoint<Scalar>> out;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const Scalar t = Scalar(grid[gi]);
    CMatrix<Scalar> h = t * sp + (Scalar(1) - t) * sq;
    h = (h + h.adjoint()).eval() / Scalar(2);
    Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(h);
    const RVector<Scalar>& ev = es.eigenvalues();
    const Scalar top = ev(sys - 1);
    Eigen::Index ms = 0;
    while (ms < sys && top - ev(sys - 1 - ms) <= Scalar(1e-9) * std::max(Scalar(1), abs(top))) ++ms;
    const CMatrix<Scalar> vs = es.eigenvectors().rightCols(ms);
    const CMatrix<Scalar> basis = kron(vs, eye2);
    const auto ops = detail::residual_operators(xa, basis);

    std::vector<CVector<Scalar>> candidates;
    if (ms <= 2) {
      // Maximally entangled with the ancilla across the system eigenspace.
      CVector<Scalar> c = CVector<Scalar>::Zero(2 * ms);
      for (Eigen::Index k = 0; k < ms; ++k) c(2 * k + k) = 1;
      candidates.push_back(c.normalized());
    }
    for (Eigen::Index k = 0; k < 2 * ms; ++k) candidates.push_back(CVector<Scalar>::Unit(2 * ms, k));

    BoundaryPoint<Scalar> pt;
    pt.axis = axis;
    pt.t = t;
    pt.max_eig = top;
    CVector<Scalar> best;
    Scalar best_score = std::numeric_limits<Scalar>::infinity();
    auto consider = [&](const CVector<Scalar>& c) {
      Scalar score = 0;
      for (const auto& op : ops) score = std::max(score, abs(c.dot(op * c).real()));
      if (score < best_score) {
        best_score = score;
        best = c;
      }
    };
    for (const auto& c : candidates) consider(c);
    if (best_score > Scalar(opt.accept_tol)) {
      for (const auto& c : candidates) consider(detail::descend(ops, c, opt.max_iterations));
      std::mt19937_64 rng(opt.seed ^ (std::uint64_t(axis) << 32) ^ std::uint64_t(gi));
      for (int s = 0; s < opt.random_starts && best_score > Scalar(opt.accept_tol); ++s) {
        CVector<Scalar> c(2 * ms);
        for (Eigen::Index k = 0; k < c.size(); ++k) {
          const double re = double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
          const double im = double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
          c(k) = Complex<Scalar>(Scalar(re), Scalar(im));
        }
        consider(detail::descend(ops, CVector<Scalar>(c.normalized()), opt.max_iterations));
      }
    }

    const CVector<Scalar> state = basis * best;
    std::array<CVector<Scalar>, 3> xpsi;
    for (int k = 0; k < 3; ++k) xpsi[k] = xa[k] * state;
    pt.F.resize(3, 3);
    for (int i = 0; i < 3; ++i) {
      pt.mean_residual = std::max(pt.mean_residual, abs(state.dot(xpsi[i]).real()));
      for (int j = 0; j < 3; ++j) {
        const Complex<Scalar> m = xpsi[i].dot(xpsi[j]);
        pt.F(i, j) = m.real();
        pt.residual_im = std::max(pt.residual_im, abs(m.imag()));
      }
    }
    pt.F = (pt.F + pt.F.transpose()).eval() / Scalar(2);
    pt.diag = pt.F.diagonal();
    pt.achievable = std::max(pt.residual_im, pt.mean_residual) <= Scalar(opt.accept_tol);
    out.push_back(std::move(pt));
  }
  return out;
}

/// All three axes, ordered by (axis, t).
template <typename Scalar>
std::vector<BoundaryPoint<Scalar>> trace_all_axes(const ObservableFrame<Scalar>& frame, int n,
                                                  const std::vector<double>& grid,
                                                  const BoundaryOptions& opt = {}) {
  std::vector<BoundaryPoint<Scalar>> all;
  for (int axis = 0; axis < 3; ++axis) {
    auto pts = trace_boundary(frame, n, axis, grid, opt);
    all.insert(all.end(), pts.begin(), pts.end());
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.axis != b.axis ? a.axis < b.axis : a.t < b.t;
  });
  return all;
}

/// Diagonals of the single-component Fisher matrices whose mixtures form the
/// inner triangle: (n^2, n, n) and permutations for n >= 3, (0, 4, 4) and
/// permutations for n = 2. Vertex i belongs to axis i.
inline std::array<Eigen::Vector3d, 3> inner_polytope(int n) {
  if (n < 2) throw PreconditionError("inner triangle needs n >= 2");
  std::array<Eigen::Vector3d, 3> v;
  for (int i = 0; i < 3; ++i) {
    if (n == 2) {
      v[i] = Eigen::Vector3d::Constant(4.0);
      v[i](i) = 0.0;
    } else {
      v[i] = Eigen::Vector3d::Constant(double(n));
      v[i](i) = double(n) * n;
    }
  }
  return v;
}

/// Diagonals of the d = 2 optima embedded in the three-parameter slice:
/// (D/2, D/2, 0) and permutations with D = n^2 + 2n - [n odd].
inline std::array<Eigen::Vector3d, 3> d2_optimum_points(int n) {
  const double half = trace_capacity(n, 2) / 2.0;
  std::array<Eigen::Vector3d, 3> v;
  for (int i = 0; i < 3; ++i) {
    v[i] = Eigen::Vector3d::Constant(half);
    v[i](i) = 0.0;
  }
  return v;
}

/// Barycentric map of (F11, F22, F33) onto the plane, scaled by 1/(n^2 + 2n):
/// x = (F22 + F33 / 2) / s, y = (sqrt(3) / 2) F33 / s. The outer triangle
/// (s, 0, 0), (0, s, 0), (0, 0, s) maps to (0, 0), (1, 0), (1/2, sqrt(3)/2).
inline Eigen::Vector2d barycentric(const Eigen::Vector3d& diag, int n) {
  const double s = double(n) * n + 2.0 * n;
  return {(diag(1) + diag(2) / 2.0) / s, std::sqrt(3.0) / 2.0 * diag(2) / s};
}

/// Convex hull (counter-clockwise, no collinear points) by the monotone chain.
inline std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
              return (a - b).norm() < 1e-14;
            }),
            pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-15) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-15) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                               const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double s = len2 == 0.0 ? 0.0 : std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

/// Distance from p to a convex polygon (0 inside). Polygons with fewer than
/// three vertices are treated as their point or segment.
inline double polygon_distance(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& poly) {
  if (poly.empty()) return std::numeric_limits<double>::infinity();
  if (poly.size() == 1) return (p - poly[0]).norm();
  bool inside = poly.size() >= 3;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    const double c = (b - a).x() * (p - a).y() - (b - a).y() * (p - a).x();
    if (c < 0.0) inside = false;
    best = std::min(best, segment_distance(p, a, b));
  }
  return inside ? 0.0 : best;
}

/// Hausdorff distance between two convex polygons given by their vertices;
/// for convex sets it is attained at a vertex of one of them.
inline double hausdorff_convex(const std::vector<Eigen::Vector2d>& a,
                               const std::vector<Eigen::Vector2d>& b) {
  double h = 0.0;
  for (const auto& p : a) h = std::max(h, polygon_distance(p, b));
  for (const auto& p : b) h = std::max(h, polygon_distance(p, a));
  return h;
}

/// Distance from the centroid c to the boundary of the triangle along the
/// ray through p.
inline double triangle_radius(const std::array<Eigen::Vector2d, 3>& tri, const Eigen::Vector2d& c,
                              const Eigen::Vector2d& p) {
  const Eigen::Vector2d dir = (p - c).normalized();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d a = tri[i];
    const Eigen::Vector2d e = tri[(i + 1) % 3] - a;
    // Solve c + s dir = a + u e.
    Eigen::Matrix2d m;
    m << dir.x(), -e.x(), dir.y(), -e.y();
    if (std::abs(m.determinant()) < 1e-15) continue;
    const Eigen::Vector2d su = m.inverse() * (a - c);
    if (su(0) > 0.0 && su(1) >= -1e-12 && su(1) <= 1.0 + 1e-12) best = std::min(best, su(0));
  }
  return best;
}

}  // namespace su2est
