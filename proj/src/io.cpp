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

#include "su2est/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace su2est {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError("not a number: '" + std::string(s) + "'");
  return v;
}

std::vector<double> parse_reals(std::string_view s) {
  std::vector<double> out;
  for (auto part : split(trim(s), ',')) out.push_back(parse_double(part));
  return out;
}

Complex<double> parse_complex(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw ParseError("empty complex entry");
  if (s.back() != 'i') return {parse_double(s), 0.0};
  s.remove_suffix(1);
  // Split before the last sign that is not an exponent sign.
  std::size_t split_at = 0;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  const std::string_view re = s.substr(0, split_at);
  std::string_view im = s.substr(split_at);
  double imag = 0;
  if (im.empty() || im == "+") imag = 1;
  else if (im == "-") imag = -1;
  else imag = parse_double(im);
  return {re.empty() ? 0.0 : parse_double(re), imag};
}

std::vector<Matrix2c<double>> parse_generators(std::string_view spec) {
  spec = trim(spec);
  std::vector<Matrix2c<double>> gens;
  if (spec == "pauli3" || spec == "pauli2" || spec == "phase1") {
    if (spec == "phase1") return {pauli<double>(3) / 2.0};
    const int d = spec == "pauli3" ? 3 : 2;
    for (int k = 1; k <= d; ++k) gens.push_back(pauli<double>(k) / 2.0);
    return gens;
  }
  for (auto g : split(spec, '|')) {
    const auto entries = split(g, ',');
    if (entries.size() != 4) throw ParseError("each generator needs 4 entries");
    Matrix2c<double> m;
    for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = parse_complex(entries[static_cast<std::size_t>(k)]);
    gens.push_back(m);
  }
  return gens;
}

UnitaryFamily<double> parse_family(std::string_view spec, std::string_view theta0) {
  auto gens = parse_generators(spec);
  const auto t = parse_reals(theta0);
  if (t.size() != gens.size())
    throw ParseError("theta0 has " + std::to_string(t.size()) + " entries, expected " +
                     std::to_string(gens.size()));
  return make_family<double>(std::move(gens), Eigen::Map<const RVector<double>>(t.data(), Eigen::Index(t.size())));
}

RMatrix<double> parse_matrix(std::string_view s) {
  const auto rows = split(trim(s), ';');
  const auto n = static_cast<Eigen::Index>(rows.size());
  RMatrix<double> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto vals = parse_reals(rows[static_cast<std::size_t>(i)]);
    if (static_cast<Eigen::Index>(vals.size()) != n) throw ParseError("matrix is not square");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = vals[static_cast<std::size_t>(j)];
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10) throw ParseError("matrix is not symmetric");
  return (m + m.transpose()) / 2.0;
}

BoundaryRow to_row(const BoundaryPoint<double>& p) {
  return BoundaryRow{p.axis + 1,  p.t,          p.diag(0),     p.diag(1),       p.diag(2),
                     p.max_eig,   p.achievable, p.residual_im, p.mean_residual};
}

void write_boundary_csv(std::vector<BoundaryRow> rows, std::ostream& out) {
  std::stable_sort(rows.begin(), rows.end(), [](const BoundaryRow& a, const BoundaryRow& b) {
    return a.axis != b.axis ? a.axis < b.axis : a.t < b.t;
  });
  out << kBoundaryCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.axis << ',' << format_double(r.t) << ',' << format_double(r.F11) << ','
        << format_double(r.F22) << ',' << format_double(r.F33) << ',' << format_double(r.max_eig)
        << ',' << (r.achievable ? 1 : 0) << ',' << format_double(r.residual_im) << ','
        << format_double(r.mean_residual) << '\n';
  }
}

void write_boundary_csv(const std::vector<BoundaryPoint<double>>& points, std::ostream& out) {
  std::vector<BoundaryRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.push_back(to_row(p));
  write_boundary_csv(std::move(rows), out);
}

void export_csv(const std::vector<BoundaryPoint<double>>& points, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  write_boundary_csv(points, f);
}

std::vector<BoundaryRow> read_boundary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kBoundaryCsvHeader)
    throw ParseError("boundary CSV header mismatch");
  std::vector<BoundaryRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 9) throw ParseError("boundary CSV row needs 9 fields");
    BoundaryRow r;
    const double axis = parse_double(f[0]);
    if (axis != 1.0 && axis != 2.0 && axis != 3.0) throw ParseError("boundary CSV axis must be 1, 2 or 3");
    r.axis = static_cast<int>(axis);
    r.t = parse_double(f[1]);
    r.F11 = parse_double(f[2]);
    r.F22 = parse_double(f[3]);
    r.F33 = parse_double(f[4]);
    r.max_eig = parse_double(f[5]);
    r.achievable = parse_double(f[6]) != 0.0;
    r.residual_im = parse_double(f[7]);
    r.mean_residual = parse_double(f[8]);
    rows.push_back(r);
  }
  return rows;
}

void write_triangle_csv(int n, std::ostream& out) {
  const double s = double(n) * n + 2.0 * n;
  out << kTriangleCsvHeader << '\n';
  auto row = [&](const char* role, const Eigen::Vector3d& v) {
    out << role << ',' << format_double(v(0)) << ',' << format_double(v(1)) << ','
        << format_double(v(2)) << '\n';
  };
  for (int i = 0; i < 3; ++i) row("outer", s * Eigen::Vector3d::Unit(i));
  for (const auto& v : inner_polytope(n)) row("inner", v);
  for (const auto& v : d2_optimum_points(n)) row("d2_optimum", v);
}

void write_svg(int n, const std::vector<BoundaryRow>& rows, std::ostream& out) {
  constexpr double size = 400.0;
  constexpr double margin = 20.0;
  const double height = size * std::sqrt(3.0) / 2.0;
  auto px = [&](const Eigen::Vector3d& diag) {
    const Eigen::Vector2d b = barycentric(diag, n);
    return std::make_pair(margin + size * b.x(), margin + height - size * b.y());
  };
  auto pt = [&](const Eigen::Vector3d& diag) {
    const auto [x, y] = px(diag);
    return format_double(std::round(x * 1000.0) / 1000.0) + "," +
           format_double(std::round(y * 1000.0) / 1000.0);
  };
  const double s = double(n) * n + 2.0 * n;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(size + 2 * margin)
      << "\" height=\"" << format_double(std::ceil(height + 2 * margin)) << "\">\n";
  out << "<polygon class=\"outer-triangle\" fill=\"none\" stroke=\"black\" points=\""
      << pt(s * Eigen::Vector3d::Unit(0)) << ' ' << pt(s * Eigen::Vector3d::Unit(1)) << ' '
      << pt(s * Eigen::Vector3d::Unit(2)) << "\"/>\n";
  const auto inner = inner_polytope(n);
  out << "<polygon class=\"inner-triangle\" fill=\"#c0c0c0\" stroke=\"none\" points=\""
      << pt(inner[0]) << ' ' << pt(inner[1]) << ' ' << pt(inner[2]) << "\"/>\n";
  for (int axis = 1; axis <= 3; ++axis) {
    std::vector<BoundaryRow> curve;
    for (const auto& r : rows)
      if (r.axis == axis && r.achievable) curve.push_back(r);
    std::stable_sort(curve.begin(), curve.end(),
                     [](const BoundaryRow& a, const BoundaryRow& b) { return a.t < b.t; });
    std::string d;
    for (std::size_t k = 0; k < curve.size(); ++k)
      d += (k == 0 ? "M" : " L") + pt(Eigen::Vector3d(curve[k].F11, curve[k].F22, curve[k].F33));
    out << "<path class=\"boundary-curve\" data-axis=\"" << axis
        << "\" fill=\"none\" stroke=\"blue\" d=\"" << d << "\"/>\n";
  }
  for (const auto& v : d2_optimum_points(n)) {
    const auto [x, y] = px(v);
    out << "<circle class=\"d2-optimum\" cx=\"" << format_double(std::round(x * 1000.0) / 1000.0)
        << "\" cy=\"" << format_double(std::round(y * 1000.0) / 1000.0)
        << "\" r=\"3\" fill=\"black\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace su2est
