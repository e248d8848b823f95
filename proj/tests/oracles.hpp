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

// Test-only reference implementations. They share no numerical code with the
// library: the exponential is a scaled Taylor series, derivatives are finite
// differences, tensor structure is built index by index.

#pragma once

#include "su2est/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using su2est::CMatrix;
using su2est::CVector;
using su2est::RMatrix;
using su2est::RVector;
using Cd = std::complex<double>;
using M2 = Eigen::Matrix<Cd, 2, 2>;

/// exp(M) for a 2x2 matrix by scaling and squaring a 30-term Taylor series.
inline M2 expm2(const M2& m) {
  const double norm = m.cwiseAbs().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const M2 a = m / std::pow(2.0, squarings);
  M2 term = M2::Identity();
  M2 sum = M2::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * a / double(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline M2 unitary(const su2est::UnitaryFamily<double>& f, const RVector<double>& theta) {
  M2 h = M2::Zero();
  for (int j = 0; j < f.dim(); ++j) h += theta(j) * f.generators[j];
  return expm2(Cd(0, 1) * h);
}

/// Fourth-order central difference of U along `dir`, Richardson-extrapolated
/// between steps h and h/2.
inline M2 fd_derivative(const su2est::UnitaryFamily<double>& f, int dir,
                        const RVector<double>& theta, double h = 1e-3) {
  auto d4 = [&](double s) {
    auto at = [&](double off) {
      RVector<double> t = theta;
      t(dir) += off;
      return unitary(f, t);
    };
    return M2((-at(2 * s) + 8.0 * at(s) - 8.0 * at(-s) + at(-2 * s)) / (12.0 * s));
  };
  return (16.0 * d4(h / 2) - d4(h)) / 15.0;
}

inline RMatrix<double> fd_channel_fisher(const su2est::UnitaryFamily<double>& f) {
  const int d = f.dim();
  std::vector<M2> du;
  for (int j = 0; j < d; ++j) du.push_back(fd_derivative(f, j, f.base_point));
  RMatrix<double> J(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) J(a, b) = 2.0 * (du[a].adjoint() * du[b]).trace().real();
  return J;
}

/// Bit of `index` belonging to site k (site 0 is the most significant).
inline int site_bit(std::size_t index, int k, int n) { return int((index >> (n - 1 - k)) & 1u); }

/// sum_k I (x) .. (x) x_k (x) .. (x) I built entry by entry.
inline CMatrix<double> collective(const M2& x, int n) {
  const std::size_t dim = std::size_t(1) << n;
  CMatrix<double> out = CMatrix<double>::Zero(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      for (int k = 0; k < n; ++k) {
        bool others_equal = true;
        for (int l = 0; l < n && others_equal; ++l)
          if (l != k && site_bit(r, l, n) != site_bit(c, l, n)) others_equal = false;
        if (others_equal) out(r, c) += x(site_bit(r, k, n), site_bit(c, k, n));
      }
    }
  }
  return out;
}

/// Product state of per-site 2-vectors, built entry by entry.
inline CVector<double> product(const std::vector<Eigen::Matrix<Cd, 2, 1>>& sites) {
  const int n = int(sites.size());
  const std::size_t dim = std::size_t(1) << n;
  CVector<double> v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Cd amp = 1;
    for (int k = 0; k < n; ++k) amp *= sites[std::size_t(k)](site_bit(i, k, n));
    v(i) = amp;
  }
  return v;
}

/// Symmetrised state with t copies of plus, by enumerating distinct
/// permutations of the pattern string.
inline CVector<double> dicke(const Eigen::Matrix<Cd, 2, 1>& plus, const Eigen::Matrix<Cd, 2, 1>& minus,
                             int n, int t) {
  std::string pattern = std::string(std::size_t(n - t), '-') + std::string(std::size_t(t), '+');
  std::sort(pattern.begin(), pattern.end());
  CVector<double> acc = CVector<double>::Zero(std::size_t(1) << n);
  do {
    std::vector<Eigen::Matrix<Cd, 2, 1>> sites;
    for (char ch : pattern) sites.push_back(ch == '+' ? plus : minus);
    acc += product(sites);
  } while (std::next_permutation(pattern.begin(), pattern.end()));
  return acc / acc.norm();
}

/// (U^(x)n (x) I_a) psi, with U from the Taylor exponential and the tensor
/// power built entry by entry.
inline CVector<double> evolve(const su2est::UnitaryFamily<double>& f, const RVector<double>& theta,
                              const CVector<double>& psi, int n, int a) {
  const M2 u = unitary(f, theta);
  const std::size_t dim = std::size_t(1) << n;
  CVector<double> out = CVector<double>::Zero(psi.size());
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      Cd amp = 1;
      for (int k = 0; k < n; ++k) amp *= u(site_bit(r, k, n), site_bit(c, k, n));
      for (int anc = 0; anc < a; ++anc) out(Eigen::Index(r) * a + anc) += amp * psi(Eigen::Index(c) * a + anc);
    }
  }
  return out;
}

inline RVector<double> probabilities(const su2est::ChannelMeasurement<double>& cm,
                                     const su2est::UnitaryFamily<double>& f, const RVector<double>& theta) {
  const CVector<double> psi = evolve(f, theta, cm.input.vector, cm.input.n, cm.input.ancilla_dim);
  RVector<double> p(Eigen::Index(cm.povm.size()));
  for (std::size_t x = 0; x < cm.povm.size(); ++x)
    p(Eigen::Index(x)) = psi.dot(cm.povm.elements[x] * psi).real();
  return p;
}

/// Classical Fisher matrix from finite differences of the outcome
/// probabilities (fourth-order central differences, step h).
inline RMatrix<double> fd_classical_fisher(const su2est::ChannelMeasurement<double>& cm,
                                           const su2est::UnitaryFamily<double>& f, double h = 1e-4) {
  const int d = f.dim();
  const RVector<double> p0 = probabilities(cm, f, f.base_point);
  RMatrix<double> dp(p0.size(), d);
  for (int i = 0; i < d; ++i) {
    auto at = [&](double off) {
      RVector<double> t = f.base_point;
      t(i) += off;
      return probabilities(cm, f, t);
    };
    dp.col(i) = (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
  }
  RMatrix<double> F = RMatrix<double>::Zero(d, d);
  for (Eigen::Index x = 0; x < p0.size(); ++x)
    if (p0(x) > 1e-9) F += dp.row(x).transpose() * dp.row(x) / p0(x);
  return F;
}

/// <X_s X_t> - <X_s><X_t> in psi for collective operators given as matrices
/// on the system (identity on an a-dimensional ancilla).
inline CMatrix<double> z_tilde(const std::vector<CMatrix<double>>& xs, const CVector<double>& psi, int a) {
  const std::size_t d = xs.size();
  std::vector<CVector<double>> xpsi;
  for (const auto& x : xs) {
    CVector<double> out = CVector<double>::Zero(psi.size());
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index c = 0; c < x.cols(); ++c)
        for (int anc = 0; anc < a; ++anc) out(r * a + anc) += x(r, c) * psi(c * a + anc);
    xpsi.push_back(out);
  }
  CMatrix<double> z(d, d);
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t t = 0; t < d; ++t)
      z(Eigen::Index(s), Eigen::Index(t)) =
          xpsi[s].dot(xpsi[t]) - psi.dot(xpsi[s]).real() * psi.dot(xpsi[t]).real();
  return z;
}

inline CVector<double> random_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector<double> v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Cd(g(rng), g(rng));
  return v / v.norm();
}

inline CMatrix<double> random_density(Eigen::Index dim, Eigen::Index rank, std::mt19937_64& rng) {
  CMatrix<double> rho = CMatrix<double>::Zero(dim, dim);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const CVector<double> v = random_state(dim, rng);
    rho += v * v.adjoint();
  }
  return rho / rho.trace().real();
}

inline RMatrix<double> random_orthogonal(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RMatrix<double> a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<RMatrix<double>> qr(a);
  RMatrix<double> q = qr.householderQ();
  return q;
}

inline RVector<double> vec(std::initializer_list<double> v) {
  RVector<double> out(Eigen::Index(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

inline double max_abs(const RMatrix<double>& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
