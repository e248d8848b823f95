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

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace su2est {

template <typename Scalar> using Complex = std::complex<Scalar>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar> using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;
template <typename Scalar> using Vector2c = Eigen::Matrix<Complex<Scalar>, 2, 1>;

/// d x d real symmetric positive semidefinite matrix.
template <typename Scalar> using FisherMatrix = RMatrix<Scalar>;

// Errors. Every failure raised by the library derives from su2est::Error so
// callers (the CLI in particular) can map them onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// A precondition of an operation was not met by its arguments.
struct PreconditionError : Error {
  using Error::Error;
};
struct DegenerateModel : Error {
  using Error::Error;
};
struct SizeLimit : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct IndexError : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct DimensionMismatch : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct NotAchievable : Error {
  using Error::Error;
};
struct RankDeficient : Error {
  using Error::Error;
};
struct InvalidPOVM : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct SingularFisher : Error {
  using Error::Error;
};
struct NotAState : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct NotPositiveDefinite : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct NoClosedForm : Error {
  using Error::Error;
};
struct NotSaturable : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct ConditionViolated : PreconditionError {
  using PreconditionError::PreconditionError;
};

/// Default numerical tolerances.
struct Tolerances {
  static constexpr double construction = 1e-10;
  static constexpr double derivative = 1e-8;
  static constexpr double achievable = 1e-9;
  static constexpr double probability_floor = 1e-12;
  static constexpr double inequality = 1e-9;
};

/// Largest copy count accepted by the dense collective-operator routines.
inline constexpr int kDefaultCopyCap = 8;

}  // namespace su2est
