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

// Text formats: family / theta0 / weight flags, the boundary and triangle
// CSV files and the barycentric SVG rendering.

#pragma once

#include "su2est/boundary.hpp"
#include "su2est/su2_model.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace su2est {

/// Malformed textual input (maps to a usage error on the command line).
struct ParseError : Error {
  using Error::Error;
};

inline constexpr std::string_view kBoundaryCsvHeader =
    "axis,t,F11,F22,F33,max_eig,achievable,residual_im,mean_residual";
inline constexpr std::string_view kTriangleCsvHeader = "role,F11,F22,F33";

/// Shortest rendering that parses back to the same double; locale-free.
std::string format_double(double v);

double parse_double(std::string_view s);
std::vector<double> parse_reals(std::string_view s);
Complex<double> parse_complex(std::string_view s);

/// `pauli3`, `pauli2`, `phase1`, or explicit generators separated by `|`,
/// each four row-major complex entries separated by `,` (e.g. `0.5,0,0,-0.5`,
/// entries such as `0.5i` or `1-2i`).
std::vector<Matrix2c<double>> parse_generators(std::string_view spec);
UnitaryFamily<double> parse_family(std::string_view spec, std::string_view theta0);

/// Rows separated by `;`, entries by `,`. Rejects non-square input and
/// asymmetry above 1e-10; returns the symmetric part.
RMatrix<double> parse_matrix(std::string_view s);

/// One row of the boundary CSV; axis is 1-based as in the file.
struct BoundaryRow {
  int axis = 1;
  double t = 0;
  double F11 = 0, F22 = 0, F33 = 0;
  double max_eig = 0;
  bool achievable = false;
  double residual_im = 0;
  double mean_residual = 0;
};

BoundaryRow to_row(const BoundaryPoint<double>& p);

/// Header plus rows sorted by (axis, t), LF line endings.
void write_boundary_csv(std::vector<BoundaryRow> rows, std::ostream& out);
void write_boundary_csv(const std::vector<BoundaryPoint<double>>& points, std::ostream& out);
void export_csv(const std::vector<BoundaryPoint<double>>& points, const std::string& path);
std::vector<BoundaryRow> read_boundary_csv(std::istream& in);

/// Roles `outer`, `inner` and `d2_optimum`, three vertices each.
void write_triangle_csv(int n, std::ostream& out);

/// Self-contained SVG of the barycentric slice: outer and inner triangles,
/// one path per axis through the achievable rows, and the d = 2 optima.
void write_svg(int n, const std::vector<BoundaryRow>& rows, std::ostream& out);

}  // namespace su2est
