#include "intcurv/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "intcurv/functional.hpp"
#include "intcurv/kernel_ops.hpp"
#include "intcurv/manifold.hpp"
#include "intcurv/solver.hpp"
#include "intcurv/stereographic.hpp"

namespace intcurv {

namespace {

constexpr double pi = std::numbers::pi;

Check at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

std::string label(int n, double alpha) {
  std::string a = std::to_string(alpha);
  a.erase(a.find_last_not_of('0') + 1);
  if (a.back() == '.') a.pop_back();
  return "n=" + std::to_string(n) + " alpha=" + a;
}

SuiteResult constants_suite() {
  SuiteResult out{"constants", {}};
  const std::vector<std::pair<int, double>> table{{1, 2.0}, {1, 3.5}, {2, 3.0}, {2, 4.0}, {3, 4.0}};
  for (const auto& [n, alpha] : table) {
    const double c = normalization_constant(n, alpha);
    const double rel = std::abs(c * direct_kernel_integral(n, alpha) - 1.0);
    out.checks.push_back(at_most("quadrature vs gamma " + label(n, alpha), rel, 1e-6));
  }
  out.checks.push_back(at_most("c(1,2) = 1/8", std::abs(normalization_constant(1, 2.0) * 8.0 - 1.0), 1e-14));
  out.checks.push_back(
      at_most("c(2,4) = 1/(8 pi)", std::abs(normalization_constant(2, 4.0) * 8.0 * pi - 1.0), 1e-14));
  out.checks.push_back(at_most("c(3,4) = 15/(128 pi)",
                               std::abs(normalization_constant(3, 4.0) * 128.0 * pi / 15.0 - 1.0), 1e-14));
  return out;
}

SuiteResult stereographic_suite() {
  SuiteResult out{"stereographic", {}};
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 3}) {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> log_radius(-3.0, 3.0);
    auto draw = [&] {
      std::vector<double> x(n);
      double norm = 0.0;
      do {
        norm = 0.0;
        for (double& v : x) {
          v = coord(rng);
          norm += v * v;
        }
      } while (norm == 0.0);
      const double scale = std::pow(10.0, log_radius(rng)) / std::sqrt(norm);
      for (double& v : x) v *= scale;
      return x;
    };
    double worst = 0.0;
    double round_trip = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const auto x = draw();
      const auto y = draw();
      worst = std::max(worst, distance_identity_residual(x, y));
      const auto back = stereographic_projection(inverse_projection(x));
      double norm = 0.0;
      for (int i = 0; i < n; ++i) norm += x[i] * x[i];
      for (int i = 0; i < n; ++i) round_trip = std::max(round_trip, std::abs(back[i] - x[i]) / std::max(1.0, norm));
    }
    out.checks.push_back(at_most("distance identity n=" + std::to_string(n), worst, 1e-12));
    out.checks.push_back(at_most("projection round trip n=" + std::to_string(n), round_trip, 1e-12));
  }
  return out;
}

std::vector<double> bubble_samples(double eps) {
  std::vector<double> pts;
  for (int k = 0; k < 20; ++k) {
    const double r = 0.15 * k * eps;
    pts.push_back(r * std::cos(0.7 * k));
    pts.push_back(r * std::sin(0.7 * k));
  }
  return pts;
}

SuiteResult bubble_suite() {
  SuiteResult out{"bubble", {}};
  for (double eps : {0.5, 1.0, 2.0}) {
    const auto report = bubble_residual(eps, bubble_samples(eps), 100.0 * eps);
    out.checks.push_back(at_most("bubble eps=" + std::to_string(eps).substr(0, 3), report.max_residual, 1e-3));
  }
  return out;
}

FlatFunction smooth_flat_function(int n) {
  FlatFunction u;
  u.value = [n](std::span<const double> x) {
    const auto xi = inverse_projection(x);
    return 1.0 + 0.3 * xi[n] + 0.2 * xi[0];
  };
  u.at_infinity = 0.7;
  return u;
}

FlatFunction unit_flat_function() {
  return {[](std::span<const double>) { return 1.0; }, 1.0};
}

SuiteResult covariance_suite() {
  SuiteResult out{"covariance", {}};
  const std::vector<std::pair<int, double>> cases{{1, 2.0}, {2, 4.0}};
  for (const auto& [n, alpha] : cases) {
    for (const auto& [name, u] :
         std::vector<std::pair<std::string, FlatFunction>>{{"u=1", unit_flat_function()},
                                                          {"smooth u", smooth_flat_function(n)}}) {
      const double coarse = verify_sphere_covariance(u, n, alpha, default_covariance_options(n, 0)).max_discrepancy;
      const double fine = verify_sphere_covariance(u, n, alpha, default_covariance_options(n, 1)).max_discrepancy;
      out.checks.push_back(at_most("covariance " + label(n, alpha) + " " + name, coarse, 1e-3));
      out.checks.push_back({"refinement " + label(n, alpha) + " " + name, fine, coarse, fine < coarse});
    }
  }
  return out;
}

SuiteResult manifold_suite() {
  SuiteResult out{"manifold", {}};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> phi_dist(0.5, 2.0);
  std::uniform_real_distribution<double> u_dist(0.1, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto m = random_manifold(20, 3, 100 + k);
    ConformalFactor phi{std::vector<double>(20), 4.0, 3};
    std::vector<double> u(20);
    for (double& v : phi.phi) v = phi_dist(rng);
    for (double& v : u) v = u_dist(rng);
    worst = std::max(worst, verify_covariance_theorem(m, phi, u));
  }
  out.checks.push_back(at_most("covariance, 10 random 20-node instances", worst, 1e-12));

  const auto vertices = six_hundred_cell_vertices();
  const std::size_t size = vertices.size() / 4;
  const auto sphere = sphere_sample_manifold(vertices, 3, std::vector<double>(size, 2.0 * pi * pi / size));
  ConformalFactor phi{std::vector<double>(size), 4.0, 3};
  std::vector<double> u(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double* xi = vertices.data() + 4 * i;
    phi.phi[i] = 1.0 + 0.3 * xi[3] + 0.1 * xi[0] * xi[1];
    u[i] = 2.0 + xi[2];
  }
  out.checks.push_back(at_most("covariance, S^3 sample", verify_covariance_theorem(sphere, phi, u), 1e-12));

  const auto q = extract_Q_alpha(sphere, 4.0, {std::vector<double>(size, 1.0), 4.0, 3});
  double mean = 0.0;
  for (double v : q.q) mean += v / size;
  double var = 0.0;
  for (double v : q.q) var += (v - mean) * (v - mean) / size;
  out.checks.push_back(at_most("Q constant on round S^3 (std/mean)", std::sqrt(var) / mean, 1e-6));
  return out;
}

SuiteResult ode_suite() {
  SuiteResult out{"ode", {}};
  const auto grid = build_grid(1, 256);
  const double u0 = std::pow(2.0, 0.75);
  out.checks.push_back(at_most("closed form u = 2^(3/4)",
                               verify_ode_s1(GridFunction::constant(grid, u0), GridFunction::constant(grid, 1.0)),
                               1e-12));

  const auto fine = build_grid(1, 512);
  const auto r = symmetrize(
      GridFunction::sample(fine, [](std::span<const double> xi) { return 1.0 + 0.5 * (2.0 * xi[0] * xi[0] - 1.0); }));
  const FunctionalContext ctx(r, 2.0);
  SolverConfig cfg;
  cfg.tolerance = 1e-9;
  const auto report = minimize(ctx, cfg);
  out.checks.push_back(at_most("solve R = 1 + 0.5 cos 2theta, el_residual", report.el_residual, 1e-6));
  out.checks.push_back(at_most("ODE u'' + u/4 = 2R/u^3", verify_ode_s1(report.u_star, r), 1e-3));
  return out;
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"constants", "stereographic", "bubble",
                                              "covariance", "manifold", "ode"};
  return names;
}

SuiteResult run_suite(const std::string& name) {
  if (name == "constants") return constants_suite();
  if (name == "stereographic") return stereographic_suite();
  if (name == "bubble") return bubble_suite();
  if (name == "covariance") return covariance_suite();
  if (name == "manifold") return manifold_suite();
  if (name == "ode") return ode_suite();
  throw std::invalid_argument("unknown suite '" + name + "'");
}

nlohmann::json to_json(const SuiteResult& result) {
  nlohmann::json doc;
  doc["suite"] = result.suite;
  doc["passed"] = result.passed();
  doc["checks"] = nlohmann::json::array();
  for (const auto& c : result.checks) {
    doc["checks"].push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
  }
  return doc;
}

}  // namespace intcurv
