#pragma once

// The problem-spec file format: a sectioned key-value text document.
//
//   # comment
//   [equation]
//   a = 1
//   b = 0
//   c = -1
//   f = 0                      # over (x1, x2, u, p, q)
//
//   [characteristics]          # either closed forms ...
//   gamma1 = x2 - x1
//   gamma2 = x2 + x1
//   inverse.x1 = (y2 - y1)/2   # optional; omit both to invert by Newton
//   inverse.x2 = (y1 + y2)/2
//                              # ... or a tracing request:
//   # trace.axis = x2
//   # trace.levels = -1:0.5:1
//   # trace.step = 0.01
//   # trace.grid = 33 33
//
//   [domain]
//   kind = axis-rectangle      # | char-rectangle | sector | quadrant
//   bounds = -2 2 -2 2         # sector: alpha beta x1_lo x1_hi; quadrant: x1_hi x2_hi
//
//   [solver]                   # optional, at most one
//   kind = goursat-wave        # | mixed-wave | darboux | goursat-linear
//   ...per-solver keys...
//
//   [reference]                # optional manufactured solution
//   u = x1*x2
//
//   [tolerances]               # optional overrides
//   [output]                   # optional csv/json paths and grid box

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ccp/catalog.hpp"
#include "ccp/characteristics.hpp"
#include "ccp/parallelogram.hpp"
#include "ccp/problem.hpp"
#include "ccp/solvers.hpp"

namespace ccp {

struct SpecSection {
  int line = 0;  ///< line of the [header]
  std::map<std::string, std::pair<std::string, int>> entries;  ///< key -> (value, line)
};

struct SpecDocument {
  std::map<std::string, SpecSection> sections;

  bool has(const std::string& section) const { return sections.count(section) > 0; }

  const SpecSection& require(const std::string& section) const {
    auto it = sections.find(section);
    if (it == sections.end()) throw SpecError(0, "missing required section [" + section + "]");
    return it->second;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_numbers(const std::string& value, int line) {
  std::vector<double> out;
  std::istringstream in(value);
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw SpecError(line, "expected a list of numbers, got '" + value + "'");
  return out;
}

}  // namespace detail

/// Parse the sectioned key-value text. Duplicate sections and keys, stray
/// text, and missing '=' are reported with line numbers.
inline SpecDocument parse_spec_text(const std::string& text) {
  SpecDocument doc;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw SpecError(line_no, "unterminated section header");
      current = detail::trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw SpecError(line_no, "empty section name");
      if (doc.sections.count(current))
        throw SpecError(line_no, "duplicate section [" + current + "]");
      doc.sections[current].line = line_no;
      continue;
    }
    if (current.empty()) throw SpecError(line_no, "entry outside of any [section]");
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecError(line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw SpecError(line_no, "empty key");
    auto& section = doc.sections[current];
    if (section.entries.count(key))
      throw SpecError(line_no, "duplicate key '" + key + "' in [" + current + "]");
    section.entries[key] = {value, line_no};
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Resolution into runtime objects

struct SolverGridOptions {
  int n1 = 51;
  int n2 = 51;
};

/// A fully resolved problem: expressions parsed, characteristics built
/// (tracing executed when requested) and the solver block decoded.
struct LoadedProblem {
  EquationSpec eq;
  CharacteristicPair pair;
  DomainSpec dom;
  bool traced = false;
  std::optional<TracedCharacteristics> trace;
  std::variant<std::monostate, GoursatWaveData, MixedWaveData, DarbouxData,
               LinearGoursatData>
      solver;
  DarbouxGridConfig darboux_cfg;
  PicardGridConfig picard_cfg;
  std::optional<Expr> reference_u;  ///< for error reporting
  Tolerances tol;
  QuadratureRule quad;
  std::optional<std::string> csv_path;
  std::optional<std::string> json_path;
  std::optional<std::array<double, 4>> grid_box;

  bool has_solver() const { return !std::holds_alternative<std::monostate>(solver); }
};

namespace detail {

inline std::string get_value(const SpecSection& s, const std::string& key,
                             const char* section) {
  auto it = s.entries.find(key);
  if (it == s.entries.end())
    throw SpecError(s.line, std::string("missing key '") + key + "' in [" + section + "]");
  return it->second.first;
}

inline std::string get_value_or(const SpecSection& s, const std::string& key,
                                const std::string& fallback) {
  auto it = s.entries.find(key);
  return it == s.entries.end() ? fallback : it->second.first;
}

inline int entry_line(const SpecSection& s, const std::string& key) {
  auto it = s.entries.find(key);
  return it == s.entries.end() ? s.line : it->second.second;
}

inline Expr parse_spec_expr(const SpecSection& s, const std::string& key,
                            const char* section, const std::vector<std::string>& vars) {
  const std::string src = get_value(s, key, section);
  try {
    return parse_expr(src, vars);
  } catch (const ParseError& e) {
    throw SpecError(entry_line(s, key),
                    std::string("in '") + key + "': " + e.what());
  }
}

inline double parse_spec_number(const SpecSection& s, const std::string& key,
                                const char* section) {
  const auto nums = parse_numbers(get_value(s, key, section), entry_line(s, key));
  if (nums.size() != 1) throw SpecError(entry_line(s, key), "'" + key + "' wants one number");
  return nums[0];
}

inline std::vector<double> parse_levels(const std::string& value, int line) {
  // either "lo:step:hi" or a plain list
  if (value.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream in(value);
    std::string part;
    while (std::getline(in, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 3) throw SpecError(line, "levels range wants lo:step:hi");
    const double lo = std::stod(parts[0]);
    const double step = std::stod(parts[1]);
    const double hi = std::stod(parts[2]);
    if (step <= 0.0 || hi < lo) throw SpecError(line, "bad levels range");
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-12 * (1.0 + std::abs(hi)); v += step) out.push_back(v);
    return out;
  }
  return parse_numbers(value, line);
}

}  // namespace detail

inline LoadedProblem load_problem(const SpecDocument& doc) {
  LoadedProblem p;

  // [tolerances] first: tracing and Newton inversion consume them
  if (doc.has("tolerances")) {
    const SpecSection& s = doc.sections.at("tolerances");
    auto opt = [&](const char* key, double& slot) {
      auto it = s.entries.find(key);
      if (it != s.entries.end())
        slot = detail::parse_numbers(it->second.first, it->second.second).at(0);
    };
    opt("eps_hyp", p.tol.eps_hyp);
    opt("tol_char", p.tol.tol_char);
    opt("eps_jac", p.tol.eps_jac);
    opt("tol_inv", p.tol.tol_inv);
    opt("picard_tol", p.tol.picard_tol);
    opt("series_eps", p.tol.series_eps);
    opt("cascade_eps", p.tol.cascade_eps);
    double max_picard = p.tol.max_picard;
    opt("max_picard", max_picard);
    p.tol.max_picard = static_cast<int>(max_picard);
    double qp = p.quad.points_per_axis, panels = p.quad.panels_per_axis;
    opt("quad_points", qp);
    opt("panels", panels);
    p.quad.points_per_axis = static_cast<int>(qp);
    p.quad.panels_per_axis = static_cast<int>(panels);
    p.quad.validate();
  }

  {
    const SpecSection& s = doc.require("equation");
    p.eq.a = detail::parse_spec_expr(s, "a", "equation", kXVars);
    p.eq.b = detail::parse_spec_expr(s, "b", "equation", kXVars);
    p.eq.c = detail::parse_spec_expr(s, "c", "equation", kXVars);
    p.eq.f = detail::parse_spec_expr(s, "f", "equation", kFVars);
  }

  {
    const SpecSection& s = doc.require("domain");
    const std::string kind = detail::get_value(s, "kind", "domain");
    const auto bounds =
        detail::parse_numbers(detail::get_value(s, "bounds", "domain"),
                              detail::entry_line(s, "bounds"));
    if (bounds.size() < 2)
      throw SpecError(detail::entry_line(s, "bounds"), "bounds wants 2-4 numbers");
    auto b = [&](std::size_t i) { return i < bounds.size() ? bounds[i] : 0.0; };
    try {
      if (kind == "axis-rectangle")
        p.dom = DomainSpec::axis_rectangle(b(0), b(1), b(2), b(3));
      else if (kind == "char-rectangle")
        p.dom = DomainSpec::char_rectangle(b(0), b(1), b(2), b(3));
      else if (kind == "sector")
        p.dom = DomainSpec::sector(b(0), b(1), b(2), b(3));
      else if (kind == "quadrant")
        p.dom = DomainSpec::quadrant(b(0), b(1));
      else
        throw SpecError(detail::entry_line(s, "kind"), "unknown domain kind '" + kind + "'");
    } catch (const Error& e) {
      throw SpecError(detail::entry_line(s, "bounds"), e.what());
    }
  }

  {
    const SpecSection& s = doc.require("characteristics");
    const bool has_trace = s.entries.count("trace.axis") > 0;
    const bool has_gamma = s.entries.count("gamma1") > 0;
    if (has_trace == has_gamma)
      throw SpecError(s.line,
                      "characteristics need either gamma1/gamma2 or a trace.* block");
    if (has_gamma) {
      const Expr g1 = detail::parse_spec_expr(s, "gamma1", "characteristics", kXVars);
      const Expr g2 = detail::parse_spec_expr(s, "gamma2", "characteristics", kXVars);
      const bool has_inv =
          s.entries.count("inverse.x1") > 0 || s.entries.count("inverse.x2") > 0;
      if (has_inv) {
        const Expr ix1 = detail::parse_spec_expr(s, "inverse.x1", "characteristics", kYVars);
        const Expr ix2 = detail::parse_spec_expr(s, "inverse.x2", "characteristics", kYVars);
        p.pair = CharacteristicPair::analytic(g1, g2, ix1, ix2, p.tol);
      } else {
        if (p.dom.kind == DomainKind::CharRectangle)
          throw SpecError(s.line,
                          "Newton inversion needs an x-space domain for its guess table");
        p.pair = CharacteristicPair::newton(g1, g2, p.dom, 9, p.tol);
      }
    } else {
      TraceConfig cfg;
      const std::string axis = detail::get_value(s, "trace.axis", "characteristics");
      if (axis == "x1")
        cfg.axis = TraceConfig::SeedAxis::X1;
      else if (axis == "x2")
        cfg.axis = TraceConfig::SeedAxis::X2;
      else
        throw SpecError(detail::entry_line(s, "trace.axis"), "trace.axis must be x1 or x2");
      if (s.entries.count("trace.levels"))
        cfg.levels = detail::parse_levels(detail::get_value(s, "trace.levels", "characteristics"),
                                          detail::entry_line(s, "trace.levels"));
      if (s.entries.count("trace.step"))
        cfg.rk_step = detail::parse_spec_number(s, "trace.step", "characteristics");
      if (s.entries.count("trace.grid")) {
        const auto g = detail::parse_numbers(detail::get_value(s, "trace.grid", "characteristics"),
                                             detail::entry_line(s, "trace.grid"));
        if (g.size() != 2) throw SpecError(detail::entry_line(s, "trace.grid"),
                                           "trace.grid wants two integers");
        cfg.grid_n1 = static_cast<int>(g[0]);
        cfg.grid_n2 = static_cast<int>(g[1]);
      }
      try {
        p.trace = trace_characteristics(p.eq, p.dom, cfg, p.tol);
      } catch (const Error& e) {
        throw SpecError(s.line, std::string("tracing failed: ") + e.what());
      }
      p.pair = p.trace->pair;
      p.traced = true;
    }
  }

  if (doc.has("solver")) {
    const SpecSection& s = doc.sections.at("solver");
    const std::string kind = detail::get_value(s, "kind", "solver");
    if (kind == "goursat-wave") {
      GoursatWaveData d;
      d.speed = detail::parse_spec_number(s, "speed", "solver");
      d.phi1 = detail::parse_spec_expr(s, "phi1", "solver", kTVar);
      d.phi2 = detail::parse_spec_expr(s, "phi2", "solver", kTVar);
      d.f = detail::parse_spec_expr(s, "f", "solver", kXVars);
      p.solver = std::move(d);
    } else if (kind == "mixed-wave") {
      MixedWaveData d;
      d.speed = detail::parse_spec_number(s, "speed", "solver");
      d.phi = detail::parse_spec_expr(s, "phi", "solver", kTVar);
      d.psi = detail::parse_spec_expr(s, "psi", "solver", kTVar);
      d.mu = detail::parse_spec_expr(s, "mu", "solver", kTVar);
      d.f = detail::parse_spec_expr(s, "f", "solver", kXVars);
      p.solver = std::move(d);
    } else if (kind == "darboux") {
      DarbouxData d;
      d.alpha = detail::parse_spec_number(s, "alpha", "solver");
      d.beta = detail::parse_spec_number(s, "beta", "solver");
      if (s.entries.count("lambda"))
        d.lambda = detail::parse_spec_number(s, "lambda", "solver");
      d.f = detail::parse_spec_expr(s, "f", "solver", kXVars);
      d.g = s.entries.count("g") ? detail::parse_spec_expr(s, "g", "solver", kGVars)
                                 : parse_expr("0", kGVars);
      if (s.entries.count("L1")) d.L1 = detail::parse_spec_number(s, "L1", "solver");
      if (s.entries.count("L2")) d.L2 = detail::parse_spec_number(s, "L2", "solver");
      d.validate();
      if (s.entries.count("grid")) {
        const auto g = detail::parse_numbers(detail::get_value(s, "grid", "solver"),
                                             detail::entry_line(s, "grid"));
        if (g.size() == 2) {
          p.darboux_cfg.n_x1 = static_cast<int>(g[0]);
          p.darboux_cfg.n_ratio = static_cast<int>(g[1]);
        }
      }
      if (s.entries.count("x1_max"))
        p.darboux_cfg.x1_max = detail::parse_spec_number(s, "x1_max", "solver");
      p.darboux_cfg.series_eps = p.tol.series_eps;
      p.darboux_cfg.picard_tol = p.tol.picard_tol;
      p.darboux_cfg.max_picard = p.tol.max_picard;
      p.solver = std::move(d);
    } else if (kind == "goursat-linear") {
      LinearGoursatData d;
      const auto corner = detail::parse_numbers(detail::get_value(s, "corner", "solver"),
                                                detail::entry_line(s, "corner"));
      if (corner.size() != 2)
        throw SpecError(detail::entry_line(s, "corner"), "corner wants two numbers");
      d.corner = {corner[0], corner[1]};
      d.a_lo = detail::parse_spec_expr(s, "a_lo", "solver", kXVars);
      d.b_lo = detail::parse_spec_expr(s, "b_lo", "solver", kXVars);
      d.c_lo = detail::parse_spec_expr(s, "c_lo", "solver", kXVars);
      d.f = detail::parse_spec_expr(s, "f", "solver", kXVars);
      d.phi = detail::parse_spec_expr(s, "phi", "solver", kTVar);
      d.psi = detail::parse_spec_expr(s, "psi", "solver", kTVar);
      const auto extent = detail::parse_numbers(detail::get_value(s, "extent", "solver"),
                                                detail::entry_line(s, "extent"));
      if (extent.size() != 2)
        throw SpecError(detail::entry_line(s, "extent"), "extent wants two numbers");
      p.picard_cfg.x1_max = extent[0];
      p.picard_cfg.x2_max = extent[1];
      if (s.entries.count("grid")) {
        const auto g = detail::parse_numbers(detail::get_value(s, "grid", "solver"),
                                             detail::entry_line(s, "grid"));
        if (g.size() == 2) {
          p.picard_cfg.n1 = static_cast<int>(g[0]);
          p.picard_cfg.n2 = static_cast<int>(g[1]);
        }
      }
      p.picard_cfg.picard_tol = p.tol.picard_tol;
      p.picard_cfg.max_picard = p.tol.max_picard;
      p.solver = std::move(d);
    } else {
      throw SpecError(detail::entry_line(s, "kind"), "unknown solver kind '" + kind + "'");
    }
  }

  if (doc.has("reference")) {
    const SpecSection& s = doc.sections.at("reference");
    p.reference_u = detail::parse_spec_expr(s, "u", "reference", kXVars);
  }

  if (doc.has("output")) {
    const SpecSection& s = doc.sections.at("output");
    if (s.entries.count("csv")) p.csv_path = detail::get_value(s, "csv", "output");
    if (s.entries.count("json")) p.json_path = detail::get_value(s, "json", "output");
    if (s.entries.count("grid_box")) {
      const auto g = detail::parse_numbers(detail::get_value(s, "grid_box", "output"),
                                           detail::entry_line(s, "grid_box"));
      if (g.size() != 4)
        throw SpecError(detail::entry_line(s, "grid_box"), "grid_box wants four numbers");
      p.grid_box = {g[0], g[1], g[2], g[3]};
    }
  }

  return p;
}

inline LoadedProblem load_problem_text(const std::string& text) {
  return load_problem(parse_spec_text(text));
}

}  // namespace ccp
