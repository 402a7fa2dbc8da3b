#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "annulus/analysis.hpp"
#include "annulus/errors.hpp"
#include "annulus/reference_tables.hpp"
#include "annulus/special_functions.hpp"

namespace annulus::cli {
namespace {

using nlohmann::json;

constexpr double kFluxTolerance = 0.15;
constexpr double kLambdaTolerance = 0.02;
constexpr double kLambda0Tolerance = 1e-6;

struct Common {
  int n_r = 64;
  int n_theta = 256;
  double tol = 1e-10;
  std::string format = "csv";
  std::string out;

  Resolution resolution() const { return {n_r, n_theta}; }
  EigenOptions options() const { return {tol, EigenOptions{}.max_iter}; }
  bool json() const { return format == "json"; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--n-r", c.n_r, "radial layers")->capture_default_str();
  cmd->add_option("--n-theta", c.n_theta, "angular divisions")->capture_default_str();
  cmd->add_option("--tol", c.tol, "solver tolerance")->capture_default_str();
  cmd->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", c.out, "write output here instead of stdout");
}

// 9 significant digits, locale independent; NaN becomes an empty CSV field.
std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

json nan_to_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json flux_json(const BoundaryFlux& f) {
  return {{"phi", f.phi}, {"u_n", f.u_n}, {"u_n_sq", f.u_n_sq}};
}

double rel_dev(double computed, double reference) { return (computed - reference) / reference; }

int cmd_mu(double b, const Common& c, std::ostream& out) {
  const double mu = mu_first(b, c.tol);
  if (c.json()) {
    out << json{{"b", b}, {"mu", mu}}.dump(2) << '\n';
  } else {
    out << "b,mu\n" << num(b) << ',' << num(mu) << '\n';
  }
  return kSuccess;
}

int cmd_solve(double a, double h, const Common& c, const std::string& mesh_dump, std::ostream& out) {
  const AnnulusSpec spec(a, h);
  const Solution s = solve_lambda(spec, c.resolution(), c.options());
  if (!mesh_dump.empty()) {
    std::ofstream dump(mesh_dump);
    if (!dump) throw GeometryError("cannot open mesh dump file " + mesh_dump);
    write_mesh(dump, s.mesh);
  }
  const BoundaryFlux flux = boundary_flux(s.mesh, s.eig);
  const double lambda_dot = shape_derivative(s.mesh, flux);
  const double defect = rellich_check(s.mesh, s.eig);
  const EigenvalueBounds bounds = eigenvalue_bounds(a, h, std::min(c.tol, kDefaultRootTolerance));
  if (c.json()) {
    out << json{{"a", a},
                {"h", h},
                {"n_r", c.n_r},
                {"n_theta", c.n_theta},
                {"lambda", s.eig.lambda},
                {"residual", s.eig.residual},
                {"iterations", s.eig.iterations},
                {"lambda_dot", lambda_dot},
                {"rellich_defect", defect},
                {"lower", bounds.lower},
                {"upper", bounds.upper},
                {"lower_kind", to_string(bounds.lower_kind)},
                {"flux", flux_json(flux)}}
               .dump(2)
        << '\n';
  } else {
    out << "a,h,n_r,n_theta,lambda,residual,iterations,lambda_dot,rellich_defect,lower,upper\n"
        << num(a) << ',' << num(h) << ',' << c.n_r << ',' << c.n_theta << ',' << num(s.eig.lambda)
        << ',' << num(s.eig.residual) << ',' << s.eig.iterations << ',' << num(lambda_dot) << ','
        << num(defect) << ',' << num(bounds.lower) << ',' << num(bounds.upper) << '\n';
  }
  return kSuccess;
}

int cmd_bounds(double a, double h, const Common& c, std::ostream& out) {
  const EigenvalueBounds b = eigenvalue_bounds(a, h, std::min(c.tol, kDefaultRootTolerance));
  if (c.json()) {
    out << json{{"a", a}, {"h", h}, {"lower", b.lower}, {"upper", b.upper},
                {"lower_kind", to_string(b.lower_kind)}}
               .dump(2)
        << '\n';
  } else {
    out << "a,h,lower,upper,lower_kind\n"
        << num(a) << ',' << num(h) << ',' << num(b.lower) << ',' << num(b.upper) << ','
        << to_string(b.lower_kind) << '\n';
  }
  return kSuccess;
}

int cmd_derivative(double a, double h, double delta, const Common& c, const std::string& mesh_dump,
                   std::ostream& out) {
  const AnnulusSpec spec(a, h);
  const Solution s = solve_lambda(spec, c.resolution(), c.options());
  if (!mesh_dump.empty()) {
    std::ofstream dump(mesh_dump);
    if (!dump) throw GeometryError("cannot open mesh dump file " + mesh_dump);
    write_mesh(dump, s.mesh);
  }
  const double lambda_dot = shape_derivative(s.mesh, boundary_flux(s.mesh, s.eig));
  double fd = std::nan("");
  if (h - delta >= 0.0) fd = fd_derivative(a, h, delta, c.resolution(), c.options());
  const double diff = std::isnan(fd) ? fd : rel_dev(lambda_dot, fd);
  if (c.json()) {
    out << json{{"a", a},
                {"h", h},
                {"delta", delta},
                {"lambda", s.eig.lambda},
                {"lambda_dot", lambda_dot},
                {"fd", nan_to_null(fd)},
                {"rel_diff", nan_to_null(diff)}}
               .dump(2)
        << '\n';
  } else {
    out << "a,h,delta,lambda,lambda_dot,fd,rel_diff\n"
        << num(a) << ',' << num(h) << ',' << num(delta) << ',' << num(s.eig.lambda) << ','
        << num(lambda_dot) << ',' << num(fd) << ',' << num(diff) << '\n';
  }
  return kSuccess;
}

int cmd_sweep(double a, double h_min, double h_max, int steps, const Common& c, std::ostream& out) {
  if (steps < 1) throw DomainError("steps must be >= 1");
  if (!(h_min <= h_max)) throw DomainError("h-min must not exceed h-max");
  if (steps == 1 && h_min != h_max) throw DomainError("steps must be >= 2 when h-min < h-max");
  std::vector<double> grid;
  for (int i = 0; i < steps; ++i) {
    grid.push_back(i + 1 == steps ? h_max : h_min + (h_max - h_min) * i / (steps - 1));
  }
  const SweepReport report = sweep(a, grid, c.resolution(), c.options());

  if (c.json()) {
    json points = json::array();
    for (const SweepPoint& p : report.points) {
      json point{{"h", p.h}, {"ok", p.ok}};
      if (p.ok) {
        point["lambda"] = p.lambda;
        point["lambda_dot"] = p.lambda_dot;
        point["fd_check"] = nan_to_null(p.fd_check);
        point["lower"] = p.bounds.lower;
        point["upper"] = p.bounds.upper;
        point["lower_kind"] = to_string(p.bounds.lower_kind);
        point["residual"] = p.residual;
        point["iterations"] = p.iterations;
        point["flux"] = flux_json(p.flux);
      } else {
        point["error"] = p.error;
      }
      points.push_back(std::move(point));
    }
    out << json{{"a", a},
                {"n_r", c.n_r},
                {"n_theta", c.n_theta},
                {"points", std::move(points)},
                {"strictly_decreasing", report.lambda_strictly_decreasing()},
                {"bounds_hold", report.bounds_hold()}}
               .dump(2)
        << '\n';
  } else {
    out << "h,lambda,lambda_dot,fd_check,lower,upper\n";
    for (const SweepPoint& p : report.points) {
      out << num(p.h) << ',';
      if (p.ok) {
        out << num(p.lambda) << ',' << num(p.lambda_dot) << ',' << num(p.fd_check) << ','
            << num(p.bounds.lower) << ',' << num(p.bounds.upper);
      } else {
        out << ",,,,";
      }
      out << '\n';
    }
  }
  if (!report.all_solved()) return kNumericalFailure;
  return report.invariants_hold() ? kSuccess : kInvariantViolation;
}

int cmd_tables(const Common& c, std::ostream& out, std::ostream& err) {
  int flux_cells = 0, flux_within = 0, lambda_cells = 0, lambda_within = 0;
  int monotone_columns = 0, columns_total = 0;
  bool invariants = true;
  bool numerical_failure = false;

  std::ostringstream csv;
  csv << "a,h,quantity,phi_deg,computed,reference,rel_dev,within_tol\n";
  json tables = json::array();
  auto yes_no = [](bool v) { return v ? "yes" : "no"; };

  for (const ReferenceTable& table : reference_tables()) {
    const double lambda0 = mu_first(table.a, std::min(c.tol, kDefaultRootTolerance));
    const double dev0 = rel_dev(lambda0, table.lambda0);
    csv << num(table.a) << ",0,lambda0,," << num(lambda0) << ',' << num(table.lambda0) << ','
        << num(dev0) << ',' << yes_no(std::fabs(dev0) < kLambda0Tolerance) << '\n';
    json jtable{{"a", table.a},
                {"lambda0", {{"computed", lambda0}, {"reference", table.lambda0}, {"rel_dev", dev0}}}};
    json jcolumns = json::array();
    double previous_lambda = lambda0;

    for (const ReferenceColumn& column : table.columns) {
      ++columns_total;
      json jcol{{"h", column.h}};
      std::optional<Solution> solved;
      try {
        solved = solve_lambda(AnnulusSpec(table.a, column.h), c.resolution(), c.options());
      } catch (const ConvergenceError& e) {
        numerical_failure = true;
        csv << num(table.a) << ',' << num(column.h) << ",error,,,,," << e.what() << '\n';
        jcol["error"] = e.what();
        jcolumns.push_back(std::move(jcol));
        continue;
      }
      const Solution& s = *solved;
      const BoundaryFlux flux = boundary_flux(s.mesh, s.eig);
      const FluxMonotonicity mono = flux_monotonicity(flux);
      if (mono.status == FluxMonotonicity::Status::pass) ++monotone_columns;
      else invariants = false;
      if (!(s.eig.lambda < previous_lambda) || !(s.eig.lambda > kUnitDiscEigenvalue)) invariants = false;
      previous_lambda = s.eig.lambda;

      json cells = json::array();
      for (int k = 0; k < kReferenceAngleCount; ++k) {
        const double deg = kReferenceAngleStepDegrees * k;
        const double computed = interpolate_flux_sq(flux, deg * std::numbers::pi / 180.0);
        const double reference = column.u_n_sq[static_cast<std::size_t>(k)];
        const double dev = rel_dev(computed, reference);
        const bool ok = std::fabs(dev) < kFluxTolerance;
        ++flux_cells;
        flux_within += ok;
        csv << num(table.a) << ',' << num(column.h) << ",u_n_sq," << num(deg) << ',' << num(computed)
            << ',' << num(reference) << ',' << num(dev) << ',' << yes_no(ok) << '\n';
        cells.push_back({{"phi_deg", deg}, {"computed", computed}, {"reference", reference}, {"rel_dev", dev}});
      }
      const double dev = rel_dev(s.eig.lambda, column.lambda);
      const bool ok = std::fabs(dev) < kLambdaTolerance;
      ++lambda_cells;
      lambda_within += ok;
      csv << num(table.a) << ',' << num(column.h) << ",lambda,," << num(s.eig.lambda) << ','
          << num(column.lambda) << ',' << num(dev) << ',' << yes_no(ok) << '\n';
      jcol["lambda"] = {{"computed", s.eig.lambda}, {"reference", column.lambda}, {"rel_dev", dev}};
      jcol["flux_monotonicity"] = to_string(mono.status);
      jcol["u_n_sq"] = std::move(cells);
      jcolumns.push_back(std::move(jcol));
    }
    jtable["columns"] = std::move(jcolumns);
    tables.push_back(std::move(jtable));
  }

  if (c.json()) {
    out << json{{"n_r", c.n_r},
                {"n_theta", c.n_theta},
                {"tables", std::move(tables)},
                {"summary",
                 {{"u_n_sq_within_tolerance", flux_within},
                  {"u_n_sq_cells", flux_cells},
                  {"lambda_within_tolerance", lambda_within},
                  {"lambda_cells", lambda_cells},
                  {"monotone_columns", monotone_columns},
                  {"columns", columns_total}}}}
               .dump(2)
        << '\n';
  } else {
    out << csv.str();
  }
  err << "tables: u_n_sq " << flux_within << '/' << flux_cells << " within 15%, lambda "
      << lambda_within << '/' << lambda_cells << " within 2%, flux monotone in " << monotone_columns
      << '/' << columns_total << " columns\n";
  if (numerical_failure) return kNumericalFailure;
  return invariants ? kSuccess : kInvariantViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"First Dirichlet eigenvalue of the eccentric annulus"};
  app.set_help_flag("--help", "print help and exit");  // -h would clash with --h
  app.require_subcommand(1);
  Common common;
  double a = 0.0, h = 0.0, b = 0.0, h_min = 0.0, h_max = 0.0, delta = 0.01;
  int steps = 7;
  std::string mesh_dump;

  auto* mu = app.add_subcommand("mu", "smallest root mu(b) of the concentric Bessel cross product");
  mu->add_option("--b", b, "inner radius of the concentric annulus")->required();
  add_common(mu, common);

  auto* solve_cmd = app.add_subcommand("solve", "FEM eigenvalue, shape derivative and flux");
  solve_cmd->add_option("--a", a, "hole radius")->required();
  solve_cmd->add_option("--h", h, "hole offset")->required();
  solve_cmd->add_option("--mesh-dump", mesh_dump, "write the mesh as v/t lines");
  add_common(solve_cmd, common);

  auto* sweep_cmd = app.add_subcommand("sweep", "uniform sweep in h");
  sweep_cmd->add_option("--a", a, "hole radius")->required();
  sweep_cmd->add_option("--h-min", h_min, "first offset")->required();
  sweep_cmd->add_option("--h-max", h_max, "last offset")->required();
  sweep_cmd->add_option("--steps", steps, "number of grid points")->capture_default_str();
  add_common(sweep_cmd, common);

  auto* bounds_cmd = app.add_subcommand("bounds", "lower and upper eigenvalue bounds");
  bounds_cmd->add_option("--a", a, "hole radius")->required();
  bounds_cmd->add_option("--h", h, "hole offset")->required();
  add_common(bounds_cmd, common);

  auto* deriv_cmd = app.add_subcommand("derivative", "shape derivative against finite differences");
  deriv_cmd->add_option("--a", a, "hole radius")->required();
  deriv_cmd->add_option("--h", h, "hole offset")->required();
  deriv_cmd->add_option("--delta", delta, "finite-difference step")->capture_default_str();
  deriv_cmd->add_option("--mesh-dump", mesh_dump, "write the mesh as v/t lines");
  add_common(deriv_cmd, common);

  auto* tables_cmd = app.add_subcommand("tables", "computed vs reference flux and eigenvalue tables");
  add_common(tables_cmd, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  std::ostringstream buffer;
  int code = kSuccess;
  try {
    if (mu->parsed()) code = cmd_mu(b, common, buffer);
    else if (solve_cmd->parsed()) code = cmd_solve(a, h, common, mesh_dump, buffer);
    else if (sweep_cmd->parsed()) code = cmd_sweep(a, h_min, h_max, steps, common, buffer);
    else if (bounds_cmd->parsed()) code = cmd_bounds(a, h, common, buffer);
    else if (deriv_cmd->parsed()) code = cmd_derivative(a, h, delta, common, mesh_dump, buffer);
    else code = cmd_tables(common, buffer, err);
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InternalError& e) {
    err << "error: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }

  if (common.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(common.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << common.out << '\n';
      return kInvalidInput;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace annulus::cli
