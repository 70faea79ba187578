// ccp: batch front-end for validating characteristic coordinate systems,
// checking the parallelogram identity, and running the boundary-value
// solvers from problem-spec files.
//
// Exit codes: 0 success, 1 numeric/validation failure, 2 spec/parse failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ccp/catalog.hpp"
#include "ccp/examples.hpp"
#include "ccp/kernel.hpp"
#include "ccp/parallelogram.hpp"
#include "ccp/solvers.hpp"
#include "ccp/specfile.hpp"

namespace {

using nlohmann::json;
using namespace ccp;

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitSpec = 2;

struct SpecSource {
  std::string path;     // file path, or
  std::string example;  // built-in example name
};

std::string read_spec_text(const SpecSource& src) {
  if (!src.example.empty()) {
    const catalog::ExampleSpec* e = catalog::find_example(src.example);
    if (!e) throw SpecError(0, "unknown example '" + src.example +
                                   "' (see `ccp list-examples`)");
    return e->text;
  }
  if (src.path.empty()) throw SpecError(0, "no spec given: pass a file or --example NAME");
  std::ifstream in(src.path);
  if (!in) throw SpecError(0, "cannot open spec file '" + src.path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_spec_options(CLI::App* cmd, SpecSource& src) {
  auto* pos = cmd->add_option("spec", src.path, "problem-spec file");
  auto* ex = cmd->add_option("--example", src.example, "use a built-in example spec");
  pos->excludes(ex);
}

void emit_report(const json& report, const std::optional<std::string>& path) {
  if (path) {
    std::ofstream out(*path);
    out << report.dump(2) << "\n";
  }
  std::cout << report.dump(2) << "\n";
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1.0);
  return v;
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const SpecSource& src, int samples, std::optional<std::string> json_path) {
  const LoadedProblem p = load_problem_text(read_spec_text(src));
  json checks = json::array();
  bool all_pass = true;

  // hyperbolicity: sample in x-space (through the inverse map when the
  // domain lives in characteristic coordinates)
  {
    double min_disc = 0.0;
    Point witness;
    bool first = true;
    for (Point x : sample_points(p.dom, samples)) {
      if (p.dom.kind == DomainKind::CharRectangle) x = p.pair.invert(x);
      const double d = p.eq.discriminant_at(x);
      if (first || d < min_disc) {
        min_disc = d;
        witness = x;
        first = false;
      }
    }
    const bool pass = !first && min_disc >= p.tol.eps_hyp;
    checks.push_back({{"name", "hyperbolicity"},
                      {"pass", pass},
                      {"min_discriminant", min_disc},
                      {"witness", {witness.x1, witness.x2}},
                      {"eps_hyp", p.tol.eps_hyp}});
    all_pass = all_pass && pass;
  }

  {
    const auto rep = validate_characteristics(p.eq, p.pair, p.dom, samples, p.tol);
    checks.push_back({{"name", "characteristic-equation"},
                      {"pass", rep.max_char_residual <= p.tol.tol_char},
                      {"max_residual", rep.max_char_residual},
                      {"witness", {rep.residual_witness.x1, rep.residual_witness.x2}},
                      {"tol_char", p.tol.tol_char}});
    checks.push_back({{"name", "jacobian"},
                      {"pass", rep.min_abs_jacobian >= p.tol.eps_jac},
                      {"min_abs_jacobian", rep.min_abs_jacobian},
                      {"witness", {rep.jacobian_witness.x1, rep.jacobian_witness.x2}},
                      {"eps_jac", p.tol.eps_jac}});
    all_pass = all_pass && rep.pass;
  }

  // canonical weight beta: nondegenerate with a constant sign
  {
    KernelContext ctx(p.eq, p.pair);
    double min_abs = 0.0, sign = 0.0;
    bool sign_ok = true, first = true;
    Point witness;
    try {
      for (Point x : sample_points(p.dom, samples)) {
        if (p.dom.kind == DomainKind::CharRectangle) x = p.pair.invert(x);
        const double beta = ctx.beta_at(x);
        if (first || std::abs(beta) < min_abs) {
          min_abs = std::abs(beta);
          witness = x;
        }
        if (sign == 0.0) sign = beta > 0 ? 1.0 : -1.0;
        if (beta * sign <= 0.0) sign_ok = false;
        first = false;
      }
      checks.push_back({{"name", "beta"},
                        {"pass", sign_ok && !first},
                        {"min_abs_beta", min_abs},
                        {"sign_constant", sign_ok},
                        {"witness", {witness.x1, witness.x2}}});
      all_pass = all_pass && sign_ok;
    } catch (const DegeneracyError& e) {
      checks.push_back({{"name", "beta"},
                        {"pass", false},
                        {"error", e.what()},
                        {"witness", {e.x1(), e.x2()}}});
      all_pass = false;
    }
  }

  // data diagnostics (informational: reported, never fatal)
  json diagnostics = json::array();
  if (const auto* d = std::get_if<MixedWaveData>(&p.solver)) {
    const auto m = matching_conditions(*d);
    diagnostics.push_back({{"name", "matching-conditions"},
                           {"value", m.value},
                           {"first_derivative", m.first_derivative},
                           {"second_derivative", m.second_derivative},
                           {"satisfied", m.worst() <= 1e-9}});
  }
  if (const auto* d = std::get_if<GoursatWaveData>(&p.solver)) {
    diagnostics.push_back(
        {{"name", "compatibility"}, {"defect", d->compatibility_defect()}});
  }
  if (const auto* d = std::get_if<LinearGoursatData>(&p.solver)) {
    diagnostics.push_back(
        {{"name", "compatibility"}, {"defect", d->compatibility_defect()}});
  }
  if (const auto* d = std::get_if<DarbouxData>(&p.solver)) {
    if (d->lambda != 0.0)
      diagnostics.push_back({{"name", "growth-bound"},
                             {"violation", darboux_growth_violation(*d)}});
  }
  if (p.traced)
    diagnostics.push_back({{"name", "trace"},
                           {"clipped_curves", p.trace->report.clipped_curves},
                           {"max_level_mismatch", p.trace->report.max_level_mismatch}});

  emit_report({{"pass", all_pass}, {"checks", checks}, {"diagnostics", diagnostics}},
              json_path);
  return all_pass ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------
// check-identity

SolutionField load_grid_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(0, "cannot open solution grid '" + path + "'");
  std::string header;
  std::getline(in, header);
  if (header != "y1,y2,u")
    throw SpecError(1, "solution grid wants the header 'y1,y2,u'");
  std::vector<double> y1s, y2s, us;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::istringstream row(line);
    double a, b, c;
    char comma1, comma2;
    if (!(row >> a >> comma1 >> b >> comma2 >> c))
      throw SpecError(line_no, "malformed CSV row '" + line + "'");
    y1s.push_back(a);
    y2s.push_back(b);
    us.push_back(c);
  }
  // infer the lattice: row-major, y2 fastest
  std::size_t n2 = 1;
  while (n2 < y1s.size() && y1s[n2] == y1s[0]) ++n2;
  if (n2 < 4 || y1s.size() % n2 != 0)
    throw SpecError(0, "solution grid is not a complete row-major lattice");
  const std::size_t n1 = y1s.size() / n2;
  if (n1 < 4) throw SpecError(0, "solution grid needs at least 4 rows per axis");
  const double h1 = (y1s.back() - y1s.front()) / static_cast<double>(n1 - 1);
  const double h2 = (y2s[n2 - 1] - y2s[0]) / static_cast<double>(n2 - 1);
  auto grid = std::make_shared<BicubicGrid>(y1s.front(), h1, static_cast<int>(n1),
                                            y2s.front(), h2, static_cast<int>(n2),
                                            std::move(us));
  return SolutionField::grid(grid);
}

int cmd_check_identity(const SpecSource& src, const std::vector<double>& rect_vals,
                       std::optional<std::string> solution_expr,
                       std::optional<std::string> solution_grid, int quad_points,
                       int panels, double threshold,
                       std::optional<std::string> json_path) {
  const LoadedProblem p = load_problem_text(read_spec_text(src));
  const CharRectangle rect{rect_vals[0], rect_vals[1], rect_vals[2], rect_vals[3]};
  if (!(rect.l1 < rect.l2 && rect.r1 < rect.r2))
    throw SpecError(0, "--rect wants l1 < l2 and r1 < r2");

  SolutionField field = [&]() -> SolutionField {
    if (solution_grid) return load_grid_field(*solution_grid);
    if (solution_expr) return SolutionField::analytic(parse_expr(*solution_expr, kXVars));
    if (p.reference_u) return SolutionField::analytic(*p.reference_u);
    throw SpecError(0, "no solution given: pass --solution/--solution-grid or add a "
                       "[reference] section");
  }();

  QuadratureRule rule = p.quad;
  if (quad_points > 0) rule.points_per_axis = quad_points;
  if (panels > 0) rule.panels_per_axis = panels;
  rule.validate();

  const IdentityReport rep = identity_residual(p.eq, p.pair, field, rect, rule);
  json out = rep.to_json();
  out["threshold"] = threshold;
  out["pass"] = std::abs(rep.residual) <= threshold;
  emit_report(out, json_path);
  return std::abs(rep.residual) <= threshold ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const SpecSource& src, std::optional<std::string> grid_flag,
              const std::vector<std::vector<double>>& at_points,
              std::optional<std::string> out_path,
              std::optional<std::string> json_path) {
  const LoadedProblem p = load_problem_text(read_spec_text(src));
  if (!p.has_solver()) throw SpecError(0, "spec has no [solver] section");

  int n1 = 51, n2 = 51;
  const bool want_grid = grid_flag.has_value() || at_points.empty();
  if (grid_flag) {
    const auto x = grid_flag->find('x');
    if (x == std::string::npos) throw SpecError(0, "--grid wants N1xN2, e.g. 51x51");
    n1 = std::stoi(grid_flag->substr(0, x));
    n2 = std::stoi(grid_flag->substr(x + 1));
    if (n1 < 2 || n2 < 2) throw SpecError(0, "--grid dimensions must be >= 2");
  }

  std::vector<Point> pts;
  std::vector<double> vals;
  json report;
  bool converged = true;

  auto default_box = [&](std::array<double, 4> fallback) -> std::array<double, 4> {
    if (p.grid_box) return *p.grid_box;
    return fallback;
  };

  try {
    if (const auto* d = std::get_if<GoursatWaveData>(&p.solver)) {
      report["solver"] = "goursat-wave";
      report["compatibility_defect"] = d->compatibility_defect();
      auto eval_at = [&](const Point& x) { return solve_goursat_wave(*d, x, p.quad); };
      for (const auto& xy : at_points) {
        pts.push_back({xy[0], xy[1]});
        vals.push_back(eval_at(pts.back()));
      }
      if (want_grid) {
        // sector grid: x1 from the box, x2 = s * speed * x1 with |s| <= 0.95
        const auto bx = default_box({0.05, 1.0, 0.0, 0.0});
        for (double x1 : linspace(std::max(bx[0], 1e-6), bx[1], n1))
          for (double s : linspace(-0.95, 0.95, n2)) {
            pts.push_back({x1, s * d->speed * x1});
            vals.push_back(eval_at(pts.back()));
          }
      }
    } else if (const auto* d = std::get_if<MixedWaveData>(&p.solver)) {
      report["solver"] = "mixed-wave";
      const auto m = matching_conditions(*d);
      report["matching_conditions"] = {{"value", m.value},
                                       {"first_derivative", m.first_derivative},
                                       {"second_derivative", m.second_derivative}};
      auto eval_at = [&](const Point& x) { return solve_mixed_wave(*d, x, p.quad); };
      for (const auto& xy : at_points) {
        pts.push_back({xy[0], xy[1]});
        vals.push_back(eval_at(pts.back()));
      }
      if (want_grid) {
        const auto bx = default_box(
            {0.0, p.dom.kind == DomainKind::Quadrant ? p.dom.b[0] : 1.0, 0.0,
             p.dom.kind == DomainKind::Quadrant ? p.dom.b[1] : 1.0});
        for (double x1 : linspace(bx[0], bx[1], n1))
          for (double x2 : linspace(bx[2], bx[3], n2)) {
            pts.push_back({x1, x2});
            vals.push_back(eval_at(pts.back()));
          }
      }
    } else if (const auto* d = std::get_if<DarbouxData>(&p.solver)) {
      report["solver"] = "darboux";
      if (d->lambda == 0.0) {
        std::vector<double> term_history;
        auto eval_at = [&](const Point& x) {
          const auto res =
              solve_darboux_series(*d, x, p.quad, p.tol.series_eps, p.tol.cascade_eps);
          if (res.terms.size() > term_history.size()) term_history = res.terms;
          return res.value;
        };
        for (const auto& xy : at_points) {
          pts.push_back({xy[0], xy[1]});
          vals.push_back(eval_at(pts.back()));
        }
        if (want_grid) {
          for (double x1 : linspace(0.0, p.darboux_cfg.x1_max, n1))
            for (double s : linspace(d->alpha, d->beta, n2)) {
              pts.push_back({x1, s * x1});
              vals.push_back(x1 == 0.0 ? 0.0 : eval_at(pts.back()));
            }
        }
        report["term_history"] = term_history;
      } else {
        const auto res = solve_darboux_field(*d, p.darboux_cfg);
        report.update(res.to_json());
        converged = res.converged;
        for (const auto& xy : at_points) {
          pts.push_back({xy[0], xy[1]});
          vals.push_back(res.solution->value_at(pts.back()));
        }
        if (want_grid) {
          for (double x1 : linspace(0.0, p.darboux_cfg.x1_max, n1))
            for (double s : linspace(d->alpha, d->beta, n2)) {
              pts.push_back({x1, s * x1});
              vals.push_back(res.solution->value_at(pts.back()));
            }
        }
      }
    } else if (const auto* d = std::get_if<LinearGoursatData>(&p.solver)) {
      report["solver"] = "goursat-linear";
      report["compatibility_defect"] = d->compatibility_defect();
      PicardGridConfig cfg = p.picard_cfg;
      if (grid_flag) {
        cfg.n1 = n1;
        cfg.n2 = n2;
      }
      const auto res = solve_goursat_linear_picard(*d, cfg);
      report.update(res.to_json());
      converged = res.converged;
      for (int i = 0; i < res.u->n1(); ++i)
        for (int j = 0; j < res.u->n2(); ++j) {
          pts.push_back(res.u->node(i, j));
          vals.push_back(res.u->at(i, j));
        }
      for (const auto& xy : at_points) {
        pts.push_back({xy[0], xy[1]});
        vals.push_back(res.u->value({xy[0], xy[1]}));
      }
    }
  } catch (const ConvergenceError& e) {
    report["converged"] = false;
    report["error"] = e.what();
    report["sup_norm_history"] = e.history();
    emit_report(report, json_path ? json_path : p.json_path);
    return kExitNumeric;
  }

  if (p.reference_u) {
    double worst = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k)
      worst = std::max(worst,
                       std::abs(vals[k] - p.reference_u->eval({pts[k].x1, pts[k].x2})));
    report["max_error_vs_reference"] = worst;
  }
  report["points"] = pts.size();
  report["converged"] = converged;

  const std::optional<std::string> csv_path = out_path ? out_path : p.csv_path;
  if (csv_path) {
    std::ofstream os(*csv_path, std::ios::binary);
    if (!os) throw SpecError(0, "cannot write CSV to '" + *csv_path + "'");
    write_solution_csv(os, pts, vals);
  } else {
    std::ostringstream os;
    write_solution_csv(os, pts, vals);
    std::cout << os.str();
  }
  emit_report(report, json_path ? json_path : p.json_path);
  return converged ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------
// trace

int cmd_trace(const SpecSource& src, std::optional<std::string> out_path) {
  const LoadedProblem p = load_problem_text(read_spec_text(src));
  TracedCharacteristics traced;
  if (p.traced) {
    traced = *p.trace;
  } else {
    if (p.dom.kind != DomainKind::AxisRectangle)
      throw SpecError(0, "trace needs an axis-rectangle domain");
    traced = trace_characteristics(p.eq, p.dom, TraceConfig{}, p.tol);
  }
  if (out_path) {
    std::ofstream os(*out_path, std::ios::binary);
    if (!os) throw SpecError(0, "cannot write CSV to '" + *out_path + "'");
    write_trace_csv(traced, os);
  } else {
    std::ostringstream os;
    write_trace_csv(traced, os);
    std::cout << os.str();
  }
  std::cerr << "traced " << traced.gamma1_grid->n1() << "x" << traced.gamma1_grid->n2()
            << " lattice; clipped curves: " << traced.report.clipped_curves
            << ", level mismatch: " << traced.report.max_level_mismatch << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvilinear characteristic-parallelogram toolkit"};
  app.require_subcommand(1);

  SpecSource src;
  int samples = 11;
  std::optional<std::string> json_path, out_path, solution_expr, solution_grid, grid_flag;
  std::vector<double> rect_vals;
  std::vector<std::vector<double>> at_points;
  int quad_points = 0, panels = 0;
  double threshold = 1e-8;

  auto* validate = app.add_subcommand("validate", "run hyperbolicity/characteristic checks");
  add_spec_options(validate, src);
  validate->add_option("--samples", samples, "grid samples per axis (default 11)");
  validate->add_option("--json-report", json_path, "also write the JSON report here");

  auto* check = app.add_subcommand("check-identity",
                                   "evaluate both sides of the parallelogram identity");
  add_spec_options(check, src);
  check->add_option("--rect", rect_vals, "characteristic rectangle l1 l2 r1 r2")
      ->expected(4)
      ->required();
  check->add_option("--solution", solution_expr, "candidate u as an expression in x1, x2");
  check->add_option("--solution-grid", solution_grid,
                    "candidate u as a CSV lattice with header y1,y2,u");
  check->add_option("--quad-points", quad_points, "Gauss points per axis");
  check->add_option("--panels", panels, "quadrature panels per axis");
  check->add_option("--tol", threshold, "pass threshold on |residual| (default 1e-8)");
  check->add_option("--json-report", json_path, "also write the JSON report here");

  auto* solve = app.add_subcommand("solve", "run the spec's solver block");
  add_spec_options(solve, src);
  solve->add_option("--grid", grid_flag, "output grid dimensions N1xN2");
  solve->add_option("--at", at_points, "evaluation point 'x1 x2' (repeatable)")
      ->expected(-2)
      ->delimiter(',');
  solve->add_option("--out", out_path, "CSV output path (default: stdout)");
  solve->add_option("--json-report", json_path, "also write the JSON report here");

  auto* trace = app.add_subcommand("trace", "trace characteristics and export the lattice");
  add_spec_options(trace, src);
  trace->add_option("--out", out_path, "CSV output path (default: stdout)");

  auto* list = app.add_subcommand("list-examples", "list built-in example specs");
  (void)list;

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) return cmd_validate(src, samples, json_path);
    if (app.got_subcommand(check))
      return cmd_check_identity(src, rect_vals, solution_expr, solution_grid, quad_points,
                                panels, threshold, json_path);
    if (app.got_subcommand(solve))
      return cmd_solve(src, grid_flag, at_points, out_path, json_path);
    if (app.got_subcommand(trace)) return cmd_trace(src, out_path);
    for (const auto& e : ccp::catalog::example_specs())
      std::cout << e.name << "\t" << e.description << "\n";
    return kExitOk;
  } catch (const SpecError& e) {
    std::cerr << "spec error"
              << (e.line() ? " (line " + std::to_string(e.line()) + ")" : "") << ": "
              << e.what() << "\n";
    return kExitSpec;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
