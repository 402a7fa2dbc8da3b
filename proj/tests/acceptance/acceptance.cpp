// Acceptance gate: one [PASS]/[FAIL] line per criterion, with the measured
// numbers underneath. `acceptance --criterion N` runs a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "annulus/analysis.hpp"
#include "annulus/reference_tables.hpp"
#include "annulus/special_functions.hpp"

#ifndef ANNULUS_CLI_PATH
#error "ANNULUS_CLI_PATH must name the command-line tool"
#endif

using namespace annulus;

namespace {

constexpr double kPi = std::numbers::pi;
const Resolution kDefault{};
const Resolution kFine{128, 512};

struct Case {
  double a, h;
};

std::vector<Case> table_cases() {
  std::vector<Case> cases;
  for (const ReferenceTable& t : reference_tables()) {
    for (const ReferenceColumn& c : t.columns) cases.push_back({t.a, c.h});
  }
  return cases;
}

const Solution& solve_cached(double a, double h, Resolution res = kDefault) {
  static std::map<std::tuple<double, double, int, int>, Solution> cache;
  const auto key = std::tuple{a, h, res.n_r, res.n_theta};
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, solve_lambda(AnnulusSpec(a, h), res)).first;
  return it->second;
}

const ReferenceColumn& reference(double a, double h) {
  for (const ReferenceTable& t : reference_tables()) {
    for (const ReferenceColumn& c : t.columns) {
      if (t.a == a && c.h == h) return c;
    }
  }
  std::abort();
}

class Report {
 public:
  void check(bool ok, const char* fmt, auto... args) {
    ok_ = ok_ && ok;
    std::string line = ok ? "      ok   " : "      MISS ";
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    lines_.push_back(line + buf);
  }
  void note(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    lines_.push_back(std::string("           ") + buf);
  }
  bool ok() const { return ok_; }
  void print(int id, const char* title) const {
    std::printf("[%s] C%d %s\n", ok_ ? "PASS" : "FAIL", id, title);
    for (const std::string& l : lines_) std::printf("%s\n", l.c_str());
    std::fflush(stdout);
  }

 private:
  bool ok_ = true;
  std::vector<std::string> lines_;
};

bool c1_concentric_roots() {
  Report r;
  for (const ReferenceTable& t : reference_tables()) {
    const double mu = mu_first(t.a);
    const double dev = std::fabs(mu - t.lambda0) / t.lambda0;
    r.check(dev <= 1e-6, "mu(%.1f) = %.11f  reference %.8f  rel dev %.2e (limit 1e-6)", t.a, mu, t.lambda0, dev);
    r.note("root residual |cross_product| at computed mu: %.1e, at reference value: %.1e",
           std::fabs(cross_product(mu, t.a)), std::fabs(cross_product(t.lambda0, t.a)));
  }
  r.print(1, "concentric eigenvalues from the Bessel cross product");
  return r.ok();
}

bool c2_fem_vs_analytic() {
  Report r;
  for (double a : {0.1, 0.3, 0.6}) {
    const double mu = mu_first(a);
    const double l32 = solve_cached(a, 0.0, {32, 128}).eig.lambda;
    const double l64 = solve_cached(a, 0.0, {64, 256}).eig.lambda;
    const double l128 = solve_cached(a, 0.0, {128, 512}).eig.lambda;
    const double gap = (l64 - mu) / mu;
    r.check(std::fabs(gap) < 5e-3, "a=%.1f default-resolution lambda %.8f vs mu %.8f: gap %.3e (limit 5e-3)", a, l64,
            mu, gap);
    const double order = std::log2((l32 - l64) / (l64 - l128));
    const double extrapolated = l128 + (l128 - l64) / (std::pow(2.0, order) - 1.0);
    const double gap_r = (extrapolated - mu) / mu;
    r.check(std::fabs(gap_r) < 1e-3 && std::fabs(gap_r) < std::fabs(gap),
            "a=%.1f Richardson (32/64/128, observed order %.2f): %.8f, gap %.2e (limit 1e-3)", a, order,
            extrapolated, gap_r);
  }
  r.print(2, "FEM against the Bessel root, with Richardson extrapolation");
  return r.ok();
}

bool c3_lambda_column() {
  Report r;
  for (const Case& c : table_cases()) {
    const double lambda = solve_cached(c.a, c.h).eig.lambda;
    const double ref = reference(c.a, c.h).lambda;
    const double dev = (lambda - ref) / ref;
    r.check(std::fabs(dev) < 0.02, "a=%.1f h=%.1f lambda %.8f reference %.8f rel dev %+.3e (limit 2e-2)", c.a, c.h,
            lambda, ref, dev);
  }
  r.print(3, "reference lambda(h) values");
  return r.ok();
}

bool c4_flux_columns() {
  Report r;
  for (const Case& c : table_cases()) {
    const Solution& s = solve_cached(c.a, c.h);
    const BoundaryFlux flux = boundary_flux(s.mesh, s.eig);
    const ReferenceColumn& ref = reference(c.a, c.h);
    for (int k : {0, 6, 12}) {
      const double computed = interpolate_flux_sq(flux, k * kReferenceAngleStepDegrees * kPi / 180.0);
      const double expected = ref.u_n_sq[static_cast<std::size_t>(k)];
      const double dev = (computed - expected) / expected;
      r.check(std::fabs(dev) < 0.15, "a=%.1f h=%.1f phi=%3.0f u_N^2 %.6g reference %.8f rel dev %+.3g (limit 0.15)",
              c.a, c.h, k * kReferenceAngleStepDegrees, computed, expected, dev);
    }
    // Reference columns increase strictly from 0 to 180 degrees.
    bool increasing = true;
    double previous = -1.0;
    for (int k = 0; k < kReferenceAngleCount; ++k) {
      const double v = interpolate_flux_sq(flux, k * kReferenceAngleStepDegrees * kPi / 180.0);
      increasing = increasing && v > previous;
      previous = v;
    }
    const FluxMonotonicity mono = flux_monotonicity(flux);
    r.check(increasing && mono.status == FluxMonotonicity::Status::pass,
            "a=%.1f h=%.1f ordering over the 13 angles matches (strictly increasing); node-level check: %s", c.a, c.h,
            to_string(mono.status));
  }
  r.print(4, "reference u_N^2 columns");
  return r.ok();
}

bool c5_shape_derivative() {
  Report r;
  for (const Case& c : table_cases()) {
    const Solution& s = solve_cached(c.a, c.h);
    const double ld = shape_derivative(s.mesh, boundary_flux(s.mesh, s.eig));
    r.check(ld < 0.0, "a=%.1f h=%.1f lambda_dot %.6g < 0 (default resolution)", c.a, c.h, ld);
  }
  // The central difference differentiates the discretisation error as well, so
  // the comparison is made on the 128 x 512 mesh; default-resolution numbers follow for reference.
  for (const Case& c : table_cases()) {
    const Solution& s = solve_cached(c.a, c.h, kFine);
    const double ld = shape_derivative(s.mesh, boundary_flux(s.mesh, s.eig));
    const double delta = 0.01;
    const double fd = fd_derivative(c.a, c.h, delta, kFine);
    const double dev = (ld - fd) / fd;
    if (std::fabs(ld) > 0.1) {
      r.check(std::fabs(dev) < 0.05, "a=%.1f h=%.1f [128x512] lambda_dot %.6g fd(delta=0.01) %.6g rel diff %+.3e (limit 5e-2)",
              c.a, c.h, ld, fd, dev);
    }
    const Solution& d = solve_cached(c.a, c.h);
    const double ld_d = shape_derivative(d.mesh, boundary_flux(d.mesh, d.eig));
    const double fd_d = fd_derivative(c.a, c.h, delta, kDefault);
    r.note("a=%.1f h=%.1f [64x256]  lambda_dot %.6g fd %.6g rel diff %+.3e", c.a, c.h, ld_d, fd_d,
           (ld_d - fd_d) / fd_d);
  }
  for (double a : {0.1, 0.3, 0.6}) {
    const Solution& s0 = solve_cached(a, 0.0);
    const Solution& s1 = solve_cached(a, 0.1);
    const double l0 = shape_derivative(s0.mesh, boundary_flux(s0.mesh, s0.eig));
    const double l1 = shape_derivative(s1.mesh, boundary_flux(s1.mesh, s1.eig));
    r.check(std::fabs(l0) <= 0.01 * std::fabs(l1), "a=%.1f |lambda_dot(0)| = %.2e <= 1%% of |lambda_dot(0.1)| = %.4g",
            a, std::fabs(l0), std::fabs(l1));
  }
  r.print(5, "shape derivative: sign, finite-difference agreement, symmetry");
  return r.ok();
}

bool c6_bounds() {
  Report r;
  const std::map<double, double> h_max{{0.1, 0.85}, {0.3, 0.65}, {0.6, 0.35}};
  int checked = 0, between = 0;
  for (const auto& [a, last] : h_max) {
    std::vector<double> grid;
    for (int i = 0; 0.05 * i <= last + 1e-12; ++i) grid.push_back(0.05 * i);
    for (const Case& c : table_cases()) {
      if (c.a == a) grid.push_back(c.h);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(), [](double x, double y) { return std::fabs(x - y) < 1e-12; }),
               grid.end());
    for (double h : grid) {
      const double lambda = solve_cached(a, h).eig.lambda;
      r.check(lambda > kUnitDiscEigenvalue, "a=%.1f h=%.2f lambda %.8f > disc %.8f", a, h, lambda, kUnitDiscEigenvalue);
      if (h > 0.0 && h < a) {
        const EigenvalueBounds b = eigenvalue_bounds(a, h);
        ++checked;
        const bool ok = b.lower < lambda && lambda < b.upper;
        between += ok;
        r.check(ok, "a=%.1f h=%.2f mu(a-h) %.6f < lambda %.6f < mu(a+h) %.6f", a, h, b.lower, lambda, b.upper);
      }
    }
  }
  r.note("%d of %d points with 0 < h < a inside the two-sided bounds", between, checked);
  r.print(6, "eigenvalue bounds");
  return r.ok();
}

int mirror(const Mesh& m, int node) {
  const int j = node / m.n_theta, k = node % m.n_theta;
  return j * m.n_theta + (m.n_theta - k) % m.n_theta;
}

bool c7_properties() {
  Report r;
  double wronskian = 0.0;
  for (double x : {0.5, 1.0, 5.0, 20.0}) {
    const double w = bessel_j1(x) * bessel_y0(x) - bessel_j0(x) * bessel_y1(x);
    wronskian = std::max(wronskian, std::fabs(w - 2.0 / (kPi * x)));
  }
  r.check(wronskian <= 1e-10, "Bessel Wronskian at x in {0.5,1,5,20}: max error %.1e (limit 1e-10)", wronskian);

  double residual = 0.0;
  for (double b = 0.05; b < 0.96; b += 0.05) residual = std::max(residual, std::fabs(cross_product(mu_first(b), b)));
  r.check(residual <= 1e-10, "cross_product root residual over b = 0.05..0.95: max %.1e (limit 1e-10)", residual);

  const double tol = EigenOptions{}.tol;
  double worst_rellich = 0.0;
  for (const Case& c : table_cases()) {
    const Solution& s = solve_cached(c.a, c.h);
    const Mesh& m = s.mesh;
    std::set<std::pair<int, int>> edges;
    bool ccw = true;
    for (const Triangle& t : m.triangles) {
      ccw = ccw && twice_signed_area(m.nodes[static_cast<std::size_t>(t[0])], m.nodes[static_cast<std::size_t>(t[1])],
                                     m.nodes[static_cast<std::size_t>(t[2])]) > 0.0;
      for (int e = 0; e < 3; ++e) {
        const int u = t[static_cast<std::size_t>(e)], v = t[static_cast<std::size_t>((e + 1) % 3)];
        edges.insert({std::min(u, v), std::max(u, v)});
      }
    }
    const long euler = static_cast<long>(m.num_nodes()) - static_cast<long>(edges.size()) +
                       static_cast<long>(m.triangles.size());
    r.check(euler == 0 && ccw, "a=%.1f h=%.1f mesh V-E+F = %ld (annulus: 0), all triangles counterclockwise: %s", c.a,
            c.h, euler, ccw ? "yes" : "no");

    const double peak = *std::max_element(s.eig.u.begin(), s.eig.u.end());
    double most_negative = 0.0, asymmetry = 0.0;
    for (int v = 0; v < static_cast<int>(m.num_nodes()); ++v) {
      const double u = s.eig.u[static_cast<std::size_t>(v)];
      most_negative = std::min(most_negative, u);
      asymmetry = std::max(asymmetry, std::fabs(u - s.eig.u[static_cast<std::size_t>(mirror(m, v))]));
    }
    r.check(most_negative >= -1e-10 * peak && asymmetry <= 10 * tol,
            "a=%.1f h=%.1f eigenvector min %.1e (>= -1e-10 max), reflection asymmetry %.1e (<= 10 tol)", c.a, c.h,
            most_negative, asymmetry);

    const double defect = rellich_check(m, s.eig);
    worst_rellich = std::max(worst_rellich, defect);
    r.check(defect < 0.02, "a=%.1f h=%.1f Rellich defect %.4f at 64x256 (limit 0.02)", c.a, c.h, defect);
    const Solution& coarse = solve_cached(c.a, c.h, {32, 128});
    const Solution& fine = solve_cached(c.a, c.h, kFine);
    const double d32 = rellich_check(coarse.mesh, coarse.eig);
    const double d128 = rellich_check(fine.mesh, fine.eig);
    r.check(defect <= 1.1 * d32 && d128 <= 1.1 * defect, "a=%.1f h=%.1f Rellich defect 32/64/128: %.4f %.4f %.4f", c.a,
            c.h, d32, defect, d128);
  }
  r.note("worst Rellich defect at default resolution: %.4f", worst_rellich);
  r.print(7, "property suites");
  return r.ok();
}

bool c8_tables_end_to_end() {
  Report r;
  const std::string out = "acceptance_tables.csv";
  const std::string command = std::string("\"") + ANNULUS_CLI_PATH + "\" tables --out " + out;
  const auto start = std::chrono::steady_clock::now();
  const int status = std::system(command.c_str());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int code = status == -1 ? -1 : WEXITSTATUS(status);
  r.check(code == 0, "`tables` exit code %d", code);
  r.check(seconds < 300.0, "`tables` wall time %.1f s (limit 300 s)", seconds);
  r.print(8, "end-to-end tables run");
  return r.ok();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<bool()>>> criteria{
      {1, c1_concentric_roots}, {2, c2_fem_vs_analytic}, {3, c3_lambda_column}, {4, c4_flux_columns},
      {5, c5_shape_derivative}, {6, c6_bounds},          {7, c7_properties},    {8, c8_tables_end_to_end},
  };
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--criterion") only = std::atoi(argv[i + 1]);
  }
  bool all = true;
  for (const auto& [id, run] : criteria) {
    if (only != 0 && id != only) continue;
    try {
      all = run() && all;
    } catch (const std::exception& e) {
      std::printf("[FAIL] C%d aborted: %s\n", id, e.what());
      all = false;
    }
  }
  return all ? 0 : 1;
}
