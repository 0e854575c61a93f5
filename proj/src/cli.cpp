#include "if2ode/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "if2ode/factors.hpp"
#include "if2ode/solver.hpp"

namespace if2ode::cli {
namespace {

using nlohmann::json;

std::string num(double v, int digits = 10) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string num(Complex z, int digits = 10) {
  if (z.imag() == 0.0) return num(z.real(), digits);
  return num(z.real(), digits) + (z.imag() < 0 ? " - " : " + ") +
         num(std::abs(z.imag()), digits) + "i";
}

json to_json(Complex z, bool real) {
  if (real) return z.real();
  return json::array({z.real(), z.imag()});
}

struct Failure {
  std::string stage;
  std::string kind;
  std::string message;
};

void report_failure(const Failure& f, const CliConfig& cfg, std::ostream& err) {
  if (cfg.format == OutputFormat::Json) {
    json j{{"schema", 1}, {"error", f.kind}, {"stage", f.stage}, {"message", f.message}};
    err << j.dump() << '\n';
  } else {
    err << "error [" << f.stage << "]: ";
    if (f.message.rfind(f.kind, 0) != 0) err << f.kind << ": ";
    err << f.message << '\n';
  }
}

struct ParsedProblem {
  Expr B, C, R;
  std::optional<Expr> f;
};

ParsedProblem parse_inputs(const CliConfig& cfg) {
  ParsedProblem p{parse(cfg.B), parse(cfg.C), parse(cfg.R), std::nullopt};
  if (cfg.f) p.f = parse(*cfg.f);
  return p;
}

OdeProblem make_problem(const CliConfig& cfg, const ParsedProblem& e) {
  std::optional<InitialConditions> ic;
  if (cfg.y0 && cfg.yp0) ic = InitialConditions{*cfg.y0, *cfg.yp0};
  return OdeProblem(e.B, e.C, e.R, {cfg.a, cfg.b}, cfg.x0.value_or(cfg.a), ic, e.f,
                    cfg.tol, cfg.grid);
}

SolveConfig make_solve_config(const CliConfig& cfg, bool reference) {
  SolveConfig sc;
  if (cfg.force_route) sc.force_route = route_from_flag(*cfg.force_route);
  sc.riccati.q0 = cfg.q0;
  sc.riccati.blowup = cfg.blowup;
  sc.riccati.tol = cfg.tol.stepper;
  sc.reference = reference;
  return sc;
}

std::string describe_discriminant(const RouteVerdict& v) {
  if (v.kind() == RouteKind::DiscriminantZero) return "D ≡ 0";
  if (!v.discriminant_value) return "D non-constant";
  std::string s = "D ≡ " + num(*v.discriminant_value);
  if (v.kind() == RouteKind::DiscriminantConstant)
    s += ", k = D/4 = " + num(*v.discriminant_value / 4.0);
  return s;
}

std::string route_line(RouteKind kind) {
  return std::string(route_name(kind)) + " (" + std::string(route_source(kind)) + ")";
}

void emit_classify(const RouteVerdict& v, const CliConfig& cfg, std::ostream& out) {
  if (cfg.format == OutputFormat::Json) {
    json j{{"schema", 1},
           {"route", route_name(v.kind())},
           {"source", route_source(v.kind())},
           {"discriminant", print(v.discriminant)}};
    j["D"] = v.discriminant_value ? json(*v.discriminant_value) : json(nullptr);
    if (const auto* dc = std::get_if<RouteVerdict::DiscriminantConstant>(&v.route))
      j["k"] = dc->k;
    if (const auto* cc = std::get_if<RouteVerdict::ConstantCoefficients>(&v.route)) {
      j["B"] = cc->B;
      j["C"] = cc->C;
    }
    out << j.dump(2) << '\n';
    return;
  }
  if (cfg.format == OutputFormat::Csv) {
    out << "x,D\n";
    for (std::size_t i = 0; i < v.sample_x.size(); ++i)
      out << num(v.sample_x[i], 17) << ',' << num(v.sample_values[i].real(), 17) << '\n';
    return;
  }
  out << "route: " << route_line(v.kind()) << ", " << describe_discriminant(v) << '\n';
  if (const auto* cc = std::get_if<RouteVerdict::ConstantCoefficients>(&v.route))
    out << "coefficients: B = " << num(cc->B) << ", C = " << num(cc->C) << '\n';
  out << "discriminant: D(x) = " << print(v.discriminant) << '\n';
}

json metrics_json(const VerificationMetrics& m) {
  json j{{"max_residual", m.max_residual},
         {"factor_defects", m.factor_defects},
         {"gh_defect", m.gh_defect},
         {"imag_residue", m.imag_residue},
         {"grid_size", m.grid_size}};
  if (m.max_abs_error) j["max_abs_error"] = *m.max_abs_error;
  if (m.max_rel_error) j["max_rel_error"] = *m.max_rel_error;
  return j;
}

json report_json(const SolveReport& r, const CliConfig& cfg) {
  const bool real = r.real_output;
  json j{{"schema", 1},
         {"route", route_name(r.used)},
         {"route_attempted", route_name(r.attempted)},
         {"source", route_source(r.used)}};
  j["D"] = r.verdict.discriminant_value ? json(*r.verdict.discriminant_value)
                                        : json(nullptr);
  if (r.factors.k) j["k"] = *r.factors.k;
  if (r.factors.c) j["c"] = *r.factors.c;
  if (r.used == RouteKind::GeneralRiccati) j["q0"] = cfg.q0;
  const auto constants = r.solution.constants.value_or(std::array<Complex, 2>{});
  j["C1"] = to_json(constants[0], real);
  j["C2"] = to_json(constants[1], real);
  j["metrics"] = metrics_json(r.metrics);
  j["warnings"] = r.warnings;
  json samples = json::array();
  for (std::size_t i = 0; i < r.x.size(); ++i)
    samples.push_back({{"x", r.x[i]},
                       {"y", to_json(r.y[i], real)},
                       {"yprime", to_json(r.yprime[i], real)}});
  j["samples"] = std::move(samples);
  return j;
}

void emit_samples_csv(const SolveReport& r, std::ostream& out) {
  if (r.real_output) {
    out << "x,y,yprime\n";
    for (std::size_t i = 0; i < r.x.size(); ++i)
      out << num(r.x[i], 17) << ',' << num(r.y[i].real(), 17) << ','
          << num(r.yprime[i].real(), 17) << '\n';
    return;
  }
  out << "x,y_re,y_im,yprime_re,yprime_im\n";
  for (std::size_t i = 0; i < r.x.size(); ++i)
    out << num(r.x[i], 17) << ',' << num(r.y[i].real(), 17) << ','
        << num(r.y[i].imag(), 17) << ',' << num(r.yprime[i].real(), 17) << ','
        << num(r.yprime[i].imag(), 17) << '\n';
}

void emit_report_text(const SolveReport& r, const CliConfig& cfg, std::ostream& out) {
  out << "route: " << route_line(r.used) << ", " << describe_discriminant(r.verdict) << '\n';
  if (r.attempted != r.used) out << "route attempted: " << route_name(r.attempted) << '\n';
  if (r.factors.k) out << "k: " << num(*r.factors.k) << '\n';
  if (r.factors.c) out << "c: " << num(*r.factors.c) << '\n';
  if (r.used == RouteKind::GeneralRiccati) out << "q0: " << num(cfg.q0) << '\n';
  if (r.solution.constants) {
    out << "C1: " << num((*r.solution.constants)[0]) << '\n';
    out << "C2: " << num((*r.solution.constants)[1]) << '\n';
  } else {
    out << "C1, C2: not fitted (no initial conditions; y is the particular part)\n";
  }
  const auto& m = r.metrics;
  out << "max residual: " << num(m.max_residual, 3) << '\n';
  out << "factor defects (g'=gP, (gQ)'=gC, h'=hQ): " << num(m.factor_defects[0], 3)
      << ", " << num(m.factor_defects[1], 3) << ", " << num(m.factor_defects[2], 3)
      << '\n';
  out << "gh defect: " << num(m.gh_defect, 3) << '\n';
  out << "imaginary residue: " << num(m.imag_residue, 3) << '\n';
  if (m.max_abs_error) out << "max error vs reference: " << num(*m.max_abs_error, 3) << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  out << "samples:\n";
  const std::size_t n = r.x.size();
  const std::size_t stride = std::max<std::size_t>(1, (n - 1) / 10);
  for (std::size_t i = 0; i < n; i += stride) {
    out << "  x = " << num(r.x[i], 6) << "  y = "
        << num(r.real_output ? Complex(r.y[i].real()) : r.y[i]) << "  y' = "
        << num(r.real_output ? Complex(r.yprime[i].real()) : r.yprime[i]) << '\n';
    if (i + stride >= n && i != n - 1) i = n - 1 - stride;
  }
}

void emit_solve(const SolveReport& r, const CliConfig& cfg, std::ostream& out) {
  switch (cfg.format) {
    case OutputFormat::Json: out << report_json(r, cfg).dump(2) << '\n'; break;
    case OutputFormat::Csv: emit_samples_csv(r, out); break;
    case OutputFormat::Text: emit_report_text(r, cfg, out); break;
  }
}

struct Check {
  std::string name;
  double value;
  double bound;
  bool ok() const { return value <= bound; }
};

std::vector<Check> verification_checks(const SolveReport& r) {
  double ymax = 0.0;
  for (const auto& v : r.y) ymax = std::max(ymax, std::abs(v));
  const double scale = 1.0 + ymax;
  const auto& m = r.metrics;
  std::vector<Check> checks{
      {"max_abs_error", m.max_abs_error.value_or(INFINITY), 1e-5 * scale},
      {"max_residual", m.max_residual, 1e-5 * scale},
      {"factor_defect_g", m.factor_defects[0], 1e-6},
      {"factor_defect_gQ", m.factor_defects[1], 1e-6},
      {"factor_defect_h", m.factor_defects[2], 1e-6},
      {"gh_defect", m.gh_defect, 1e-8},
  };
  if (r.real_output) checks.push_back({"imag_residue", m.imag_residue, 1e-8});
  return checks;
}

bool emit_verify(const SolveReport& r, const CliConfig& cfg, std::ostream& out) {
  const auto checks = verification_checks(r);
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.ok();
  if (cfg.format == OutputFormat::Json) {
    json j = report_json(r, cfg);
    j.erase("samples");
    json arr = json::array();
    for (const auto& c : checks)
      arr.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.ok()}});
    j["checks"] = std::move(arr);
    j["pass"] = ok;
    out << j.dump(2) << '\n';
  } else if (cfg.format == OutputFormat::Csv) {
    out << "check,value,bound,pass\n";
    for (const auto& c : checks)
      out << c.name << ',' << num(c.value, 17) << ',' << num(c.bound, 17) << ','
          << (c.ok() ? "true" : "false") << '\n';
  } else {
    out << "route: " << route_line(r.used) << ", " << describe_discriminant(r.verdict) << '\n';
    for (const auto& w : r.warnings) out << "warning: " << w << '\n';
    for (const auto& c : checks)
      out << (c.ok() ? "PASS " : "FAIL ") << c.name << " = " << num(c.value, 3)
          << " (bound " << num(c.bound, 3) << ")\n";
    out << (ok ? "verification passed" : "verification FAILED") << '\n';
  }
  return ok;
}

void emit_basis(const SolveReport& r, const CliConfig& cfg, std::ostream& out) {
  const RealBasis basis = real_basis(r.solution, r.factors, Grid(r.x.size() > 1
      ? Interval{r.x.front(), r.x.back()} : Interval{}, r.solution.x0, r.x.size()));
  if (cfg.format == OutputFormat::Json) {
    json samples = json::array();
    for (std::size_t i = 0; i < r.x.size(); ++i)
      samples.push_back({{"x", r.x[i]}, {"u", basis.u[i]}, {"v", basis.v[i]}});
    json j{{"schema", 1},
           {"route", route_name(r.used)},
           {"source", route_source(r.used)},
           {"u_source", basis.u_source},
           {"v_source", basis.v_source},
           {"factor_defects", r.metrics.factor_defects},
           {"samples", std::move(samples)}};
    if (r.factors.k) j["k"] = *r.factors.k;
    if (r.factors.c) j["c"] = *r.factors.c;
    out << j.dump(2) << '\n';
    return;
  }
  if (cfg.format == OutputFormat::Csv) {
    out << "x,u,v\n";
    for (std::size_t i = 0; i < r.x.size(); ++i)
      out << num(r.x[i], 17) << ',' << num(basis.u[i], 17) << ',' << num(basis.v[i], 17)
          << '\n';
    return;
  }
  out << "route: " << route_line(r.used) << ", " << describe_discriminant(r.verdict) << '\n';
  out << "u = " << basis.u_source << ", v = " << basis.v_source << '\n';
  out << "factor defects (g'=gP, (gQ)'=gC, h'=hQ): " << num(r.metrics.factor_defects[0], 3)
      << ", " << num(r.metrics.factor_defects[1], 3) << ", "
      << num(r.metrics.factor_defects[2], 3) << '\n';
  const std::size_t n = r.x.size();
  const std::size_t stride = std::max<std::size_t>(1, (n - 1) / 10);
  for (std::size_t i = 0; i < n; i += stride)
    out << "  x = " << num(r.x[i], 6) << "  u = " << num(basis.u[i]) << "  v = "
        << num(basis.v[i]) << '\n';
}

}  // namespace

Tolerances parse_tolerance_override(const std::string& text, Tolerances base) {
  auto to_double = [](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !(v > 0)) throw std::invalid_argument("bad tolerance '" + s + "'");
    return v;
  };
  if (text.find('=') == std::string::npos) {
    base.quadrature = base.stepper = to_double(text);
    return base;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad tolerance item '" + item + "'");
    const std::string key = item.substr(0, eq);
    const double v = to_double(item.substr(eq + 1));
    if (key == "quad") base.quadrature = v;
    else if (key == "const") base.constant = v;
    else if (key == "comp") base.complementary_residual = v;
    else if (key == "step") base.stepper = v;
    else throw std::invalid_argument("unknown tolerance key '" + key + "'");
  }
  return base;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solve y'' + B(x) y' + C(x) y = R(x) with two integrating factors",
               "if2ode"};
  app.require_subcommand(1);

  CliConfig cfg;
  std::vector<double> interval;
  std::vector<double> ic;
  std::string format = "text";
  std::optional<double> quad_tol, const_tol;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--B", cfg.B, "coefficient B(x)")->required();
    sub->add_option("--C", cfg.C, "coefficient C(x)")->required();
    sub->add_option("--R", cfg.R, "right-hand side R(x)")->capture_default_str();
    sub->add_option("--f", cfg.f, "known complementary solution f(x)");
    sub->add_option("--interval", interval, "solve interval a b")->expected(2)->required();
    sub->add_option("--x0", cfg.x0, "base point (default a)");
    sub->add_option("--grid", cfg.grid, "grid size")->capture_default_str();
    sub->add_option("--riccati-q0", cfg.q0, "initial value Q(x0) for the Riccati route")
        ->capture_default_str();
    sub->add_option("--riccati-blowup", cfg.blowup, "Riccati blow-up threshold")
        ->capture_default_str();
    sub->add_option("--tol", quad_tol, "quadrature and stepper tolerance");
    sub->add_option("--const-tol", const_tol, "constancy detection tolerance");
    sub->add_option("--force-route", cfg.force_route, "override route selection")
        ->check(CLI::IsMember({"constant", "cor1", "cor2", "complementary", "riccati"}));
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    sub->add_option("--output", cfg.output, "write the payload to a file instead of stdout");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve and report y, y' on the grid");
  CLI::App* classify_cmd = app.add_subcommand("classify", "report which route applies");
  CLI::App* verify_cmd = app.add_subcommand("verify", "solve and check against a reference integrator");
  CLI::App* basis_cmd = app.add_subcommand("basis", "report a real basis of the homogeneous equation");
  for (CLI::App* sub : {solve_cmd, classify_cmd, verify_cmd, basis_cmd}) add_common(sub);
  for (CLI::App* sub : {solve_cmd, verify_cmd})
    sub->add_option("--ic", ic, "initial conditions y(x0) y'(x0)")->expected(2);
  verify_cmd->get_option("--ic")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.format = format == "csv" ? OutputFormat::Csv
               : format == "json" ? OutputFormat::Json
                                  : OutputFormat::Text;
  cfg.a = interval.at(0);
  cfg.b = interval.at(1);
  if (ic.size() == 2) {
    cfg.y0 = ic[0];
    cfg.yp0 = ic[1];
  }

  auto usage = [&](const std::string& msg) {
    report_failure({"usage", "UsageError", msg}, cfg, err);
    return 1;
  };
  if (const char* env = std::getenv("IF2ODE_TOL")) {
    try {
      cfg.tol = parse_tolerance_override(env, cfg.tol);
    } catch (const std::exception& e) {
      return usage(std::string("IF2ODE_TOL: ") + e.what());
    }
  }
  if (quad_tol) cfg.tol.quadrature = cfg.tol.stepper = *quad_tol;
  if (const_tol) cfg.tol.constant = *const_tol;
  if (!(cfg.a < cfg.b)) return usage("interval must satisfy a < b");
  if (cfg.x0 && !(*cfg.x0 >= cfg.a && *cfg.x0 <= cfg.b))
    return usage("x0 must lie in [a, b]");
  if (cfg.grid < 33) return usage("grid must have at least 33 nodes");

  ParsedProblem exprs;
  try {
    exprs = parse_inputs(cfg);
  } catch (const ParseError& e) {
    return usage(e.what());
  }

  std::string stage = "problem";
  std::ostringstream payload;
  int code = 0;
  try {
    const OdeProblem problem = make_problem(cfg, exprs);
    if (cfg.subcommand == "classify") {
      stage = "classify";
      emit_classify(classify(problem), cfg, payload);
    } else {
      stage = "solve";
      const bool reference = cfg.subcommand != "basis";
      const SolveReport report = solve(problem, make_solve_config(cfg, reference));
      if (cfg.subcommand == "solve") {
        emit_solve(report, cfg, payload);
      } else if (cfg.subcommand == "verify") {
        stage = "verify";
        if (!emit_verify(report, cfg, payload)) code = 2;
      } else {
        emit_basis(report, cfg, payload);
      }
    }
  } catch (const Error& e) {
    report_failure({stage, e.kind(), e.what()}, cfg, err);
    return 2;
  } catch (const std::exception& e) {
    report_failure({stage, "InternalError", e.what()}, cfg, err);
    return 2;
  }

  if (cfg.output) {
    std::ofstream file(*cfg.output, std::ios::binary);
    if (!file) return usage("cannot open output file " + *cfg.output);
    file << payload.str();
  } else {
    out << payload.str();
  }
  if (code != 0) err << "verification failed\n";
  return code;
}

}  // namespace if2ode::cli
