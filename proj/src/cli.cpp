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

#include "su2est/cli.hpp"

#include "su2est/io.hpp"
#include "su2est/strategies.hpp"
#include "su2est/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace su2est {
namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string family;
  std::string theta0;
  std::string weight = "J";
  std::string orthogonal;
  int n = 1;
  int d = 3;
  double tol = 1e-6;
  int steps = 201;
  std::string csv_path;
  std::string triangle_path;
  std::string svg_path;
  int nmax = 5;
  double perturb = 0;
};

json to_json(const RMatrix<double>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const Complex<double>& z) { return json::array({z.real(), z.imag()}); }

template <typename Derived>
json complex_matrix_json(const Eigen::MatrixBase<Derived>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(Complex<double>(m(i, j))));
    rows.push_back(row);
  }
  return rows;
}

json complex_vector_json(const CVector<double>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

std::string default_family(int d) {
  switch (d) {
    case 1: return "phase1";
    case 2: return "pauli2";
    case 3: return "pauli3";
    default: throw ParseError("--d must be 1, 2 or 3");
  }
}

UnitaryFamily<double> family_from(const RunConfig& cfg, int d_hint) {
  const std::string spec = cfg.family.empty() ? default_family(d_hint) : cfg.family;
  std::string theta = cfg.theta0;
  if (theta.empty()) {
    const auto d = parse_generators(spec).size();
    for (std::size_t k = 0; k < d; ++k) theta += k == 0 ? "0" : ",0";
  }
  return parse_family(spec, theta);
}

RMatrix<double> weight_from(const RunConfig& cfg, const RMatrix<double>& J) {
  if (cfg.weight == "J") return J;
  RMatrix<double> w = parse_matrix(cfg.weight);
  if (w.rows() != J.rows()) throw ParseError("weight matrix size does not match d");
  return w;
}

int cmd_model(const RunConfig& cfg, std::ostream& out) {
  const auto fam = family_from(cfg, 3);
  const auto fisher = channel_fisher(fam);
  const int d = fam.dim();
  RMatrix<double> O = RMatrix<double>::Identity(d, d);
  if (!cfg.orthogonal.empty()) O = parse_matrix(cfg.orthogonal);
  const auto frame = observable_frame(fisher, fam, O);
  json j;
  j["d"] = d;
  j["theta0"] = std::vector<double>(fam.base_point.data(), fam.base_point.data() + d);
  j["J"] = to_json(fisher.J);
  j["K"] = to_json(frame.K);
  j["O"] = to_json(frame.O);
  json xs = json::array();
  json frames = json::array();
  for (int i = 0; i < 3; ++i) {
    xs.push_back(complex_matrix_json(frame.X[i]));
    frames.push_back({{"e_plus", complex_vector_json(frame.e_plus[i])},
                      {"e_minus", complex_vector_json(frame.e_minus[i])}});
  }
  j["X"] = xs;
  j["eigenframes"] = frames;
  j["c"] = complex_matrix_json(frame.c);
  out << j.dump(2) << '\n';
  return kExitOk;
}

json bound_json(const BoundReport<double>& r) {
  json j;
  j["bound_value"] = r.bound_value;
  j["regime"] = regime_name(r.regime);
  j["gm_constant"] = r.gm_constant;
  j["achievability_known"] = r.achievability_known;
  j["optimal_F"] = r.optimal_F ? to_json(*r.optimal_F) : json(nullptr);
  if (r.regime_ratio) j["regime_ratio"] = *r.regime_ratio;
  j["at_regime_boundary"] = r.at_regime_boundary;
  if (r.alternate_value) j["alternate_value"] = *r.alternate_value;
  return j;
}

int cmd_bound(const RunConfig& cfg, std::ostream& out) {
  const auto fam = family_from(cfg, cfg.d);
  if (fam.dim() != cfg.d) throw ParseError("--d does not match the family");
  const RMatrix<double> J = channel_fisher(fam).J;
  const auto spec = weight_spectrum(weight_from(cfg, J), J);
  json j = bound_json(gm_bound(spec, cfg.n, cfg.d));
  j["w"] = std::vector<double>(spec.w.data(), spec.w.data() + spec.w.size());
  j["n"] = cfg.n;
  j["d"] = cfg.d;
  out << j.dump(2) << '\n';
  return kExitOk;
}

StrategyReport<double> single_component(const ObservableFrame<double>& frame,
                                        const UnitaryFamily<double>& fam, InputState<double> in,
                                        const RMatrix<double>& W) {
  RandomizedStrategy<double> s;
  s.components.push_back(achieving_component(1.0, frame, fam, std::move(in)));
  return detail::finish_report(std::move(s), frame, fam, W, std::optional<FisherMatrix<double>>());
}

int cmd_strategy(const RunConfig& cfg, std::ostream& out) {
  const auto fam = family_from(cfg, cfg.d);
  const int d = cfg.d;
  const int n = cfg.n;
  if (fam.dim() != d) throw ParseError("--d does not match the family");
  const RMatrix<double> J = channel_fisher(fam).J;
  const auto spec = weight_spectrum(weight_from(cfg, J), J);
  const auto frame = weighted_frame(spec, fam);
  const auto bound = gm_bound(spec, n, d);
  const bool flat = (spec.w.maxCoeff() - spec.w.minCoeff()) <= 1e-10 * std::max(1.0, spec.w.maxCoeff());

  StrategyReport<double> rep;
  std::string kind;
  if (d == 1 || n == 1) {
    rep = single_component(frame, fam, saturating_input(frame, fam, n, d), spec.W);
    kind = "saturating";
  } else if (d == 3 && n == 2) {
    rep = strategy_d3_n2(spec, frame, fam);
    kind = "d3_n2";
  } else if (d == 3) {
    rep = optimal_strategy_d3(spec, frame, fam, n);
    kind = "d3_cat_mixture";
  } else if (flat) {
    rep = single_component(frame, fam, optimal_input_d2(frame, fam, n), spec.W);
    kind = "d2_optimal_input";
  } else if (n >= 3) {
    rep = asymptotic_strategy_d2(spec, frame, fam, n);
    kind = "d2_asymptotic";
  } else {
    throw NoClosedForm("no strategy construction for d = 2, n = 2 with a general weight");
  }
  const bool closed_form = bound.achievability_known && kind != "d2_asymptotic";
  const double gap = rep.weighted_trace - bound.bound_value;

  json j;
  j["kind"] = kind;
  j["n"] = n;
  j["d"] = d;
  json comps = json::array();
  for (std::size_t k = 0; k < rep.strategy.components.size(); ++k) {
    const auto& c = rep.strategy.components[k];
    comps.push_back({{"weight", c.weight},
                     {"ancilla_dim", c.measurement.input.ancilla_dim},
                     {"amplitudes", complex_vector_json(c.measurement.input.vector)},
                     {"outcomes", c.measurement.povm.size()},
                     {"fisher", to_json(rep.component_F[k])}});
  }
  j["components"] = comps;
  j["mixed_fisher"] = to_json(rep.achieved_F);
  j["weighted_trace"] = rep.weighted_trace;
  if (d == 2 && kind == "d2_asymptotic")
    j["scaled_weighted_trace"] = rep.weighted_trace * (n * n + 2 * n);
  j["bound"] = bound_json(bound);
  j["gap"] = gap;
  j["closed_form"] = closed_form;
  out << j.dump(2) << '\n';
  return closed_form && std::abs(gap) > cfg.tol ? kExitVerifyFailed : kExitOk;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
}

int cmd_boundary(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n < 2) throw PreconditionError("boundary tracing needs n >= 2");
  const auto fam = pauli_family<double>(3, RVector<double>::Zero(3));
  const auto frame = observable_frame(channel_fisher(fam), fam);
  const auto pts = trace_all_axes(frame, cfg.n, t_grid(cfg.steps));
  std::vector<BoundaryRow> rows;
  for (const auto& p : pts) rows.push_back(to_row(p));

  const std::string csv = cfg.csv_path.empty() ? "boundary_n" + std::to_string(cfg.n) + ".csv" : cfg.csv_path;
  const std::string tri =
      cfg.triangle_path.empty() ? "triangle_n" + std::to_string(cfg.n) + ".csv" : cfg.triangle_path;
  std::ostringstream b;
  write_boundary_csv(rows, b);
  write_file(csv, b.str());
  std::ostringstream t;
  write_triangle_csv(cfg.n, t);
  write_file(tri, t.str());
  if (!cfg.svg_path.empty()) {
    std::ostringstream s;
    write_svg(cfg.n, rows, s);
    write_file(cfg.svg_path, s.str());
  }
  std::size_t ok = 0;
  for (const auto& r : rows) ok += r.achievable ? 1 : 0;
  json j;
  j["n"] = cfg.n;
  j["points"] = rows.size();
  j["achievable"] = ok;
  j["boundary_csv"] = csv;
  j["triangle_csv"] = tri;
  j["svg"] = cfg.svg_path.empty() ? json(nullptr) : json(cfg.svg_path);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  VerifyOptions opt;
  opt.nmax = cfg.nmax;
  opt.perturb = cfg.perturb;
  opt.tol = cfg.tol;
  const auto results = run_verify(opt);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " n=" << r.n << " err=" << format_double(r.error)
        << '\n';
  }
  out << (all ? "ALL PASS" : "SOME CHECKS FAILED") << " (" << results.size() << " checks)\n";
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("SU2EST_TOL")) {
    try {
      cfg.tol = parse_double(env);
    } catch (const ParseError& e) {
      err << "SU2EST_TOL: " << e.what() << '\n';
      return kExitUsage;
    }
  }

  CLI::App app{"Estimation theory for SU(2) unitary channels"};
  app.require_subcommand(1);
  auto* model = app.add_subcommand("model", "channel Fisher matrix and observable frame");
  model->add_option("--family", cfg.family, "pauli3 | pauli2 | phase1 | explicit generators");
  model->add_option("--theta0", cfg.theta0, "comma-separated reference point");
  model->add_option("--O", cfg.orthogonal, "orthogonal matrix, rows separated by ';'");

  auto* bound = app.add_subcommand("bound", "lower bound on Tr W F^-1");
  auto* strategy = app.add_subcommand("strategy", "optimal strategy and its Fisher matrix");
  for (auto* sub : {bound, strategy}) {
    sub->add_option("--d", cfg.d, "parameter count")->check(CLI::Range(1, 3));
    sub->add_option("--n", cfg.n, "copy count")->check(CLI::PositiveNumber);
    sub->add_option("--weight", cfg.weight, "weight matrix, rows separated by ';', or J");
    sub->add_option("--family", cfg.family, "family spec (defaults to the Pauli family for d)");
    sub->add_option("--theta0", cfg.theta0, "comma-separated reference point");
  }
  strategy->add_option("--tol", cfg.tol, "tolerance on the gap to the bound");

  auto* boundary = app.add_subcommand("boundary", "trace the Fisher-matrix slice boundary");
  boundary->add_option("--n", cfg.n, "copy count")->required();
  boundary->add_option("--steps", cfg.steps, "grid points per axis");
  boundary->add_option("--csv", cfg.csv_path, "boundary CSV output path");
  boundary->add_option("--triangle", cfg.triangle_path, "triangle CSV output path");
  boundary->add_option("--svg", cfg.svg_path, "optional SVG output path");

  auto* verify = app.add_subcommand("verify", "run the self-check battery");
  verify->add_option("--nmax", cfg.nmax, "largest copy count")->check(CLI::Range(1, kDefaultCopyCap));
  verify->add_option("--tol", cfg.tol, "check tolerance");
  verify->add_option("--perturb", cfg.perturb, "offset added to every checked quantity")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*model) return cmd_model(cfg, out);
    if (*bound) return cmd_bound(cfg, out);
    if (*strategy) return cmd_strategy(cfg, out);
    if (*boundary) return cmd_boundary(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  }
  return kExitUsage;
}

}  // namespace su2est
