// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// A criterion also fails when it exceeds its wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "intcurv/descent.hpp"
#include "intcurv/functional.hpp"
#include "intcurv/harmonics.hpp"
#include "intcurv/kernel_ops.hpp"
#include "intcurv/manifold.hpp"
#include "intcurv/solver.hpp"
#include "intcurv/stereographic.hpp"

using namespace intcurv;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what, double value) {
    if (!ok) passed = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << ' ' << value << (ok ? "" : " [!]");
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

GridFunction even_cos2(const GridPtr& grid, double amplitude) {
  return symmetrize(GridFunction::sample(
      grid, [amplitude](std::span<const double> x) { return 1.0 + amplitude * (2 * x[0] * x[0] - 1); }));
}

void constants(Outcome& out) {
  const std::vector<std::pair<int, double>> table{{1, 2.0}, {1, 3.5}, {2, 3.0}, {2, 4.0}, {3, 4.0}};
  double worst = 0.0;
  for (const auto& [n, alpha] : table) {
    worst = std::max(worst, std::abs(normalization_constant(n, alpha) * direct_kernel_integral(n, alpha, 64) - 1.0));
  }
  out.require(worst <= 1e-6, "max rel err quadrature vs gamma", worst);
  const double ref = std::max({std::abs(normalization_constant(1, 2.0) * 8.0 - 1.0),
                               std::abs(normalization_constant(2, 4.0) * 8.0 * pi - 1.0),
                               std::abs(normalization_constant(3, 4.0) * 128.0 * pi / 15.0 - 1.0)});
  out.require(ref <= 1e-12, "reference values rel err", ref);
}

void distance_identity(Outcome& out) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> log_r(-3.0, 3.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    auto draw = [&] {
      std::vector<double> x(n);
      double norm = 0.0;
      for (double& v : x) {
        v = normal(rng);
        norm += v * v;
      }
      const double radius = std::pow(10.0, log_r(rng));
      for (double& v : x) v *= radius / std::sqrt(norm);
      return x;
    };
    for (int k = 0; k < 1000; ++k) {
      const auto x = draw();
      const auto y = draw();
      worst = std::max(worst, distance_identity_residual(x, y));
    }
  }
  out.require(worst <= 1e-12, "max residual (3000 pairs, n=1..3)", worst);
}

void bubble(Outcome& out) {
  double worst = 0.0;
  double worst_ratio = 0.0;
  for (double eps : {0.5, 1.0, 2.0}) {
    std::vector<double> pts;
    for (int k = 0; k < 20; ++k) {
      pts.push_back(0.15 * k * eps * std::cos(0.7 * k));
      pts.push_back(0.15 * k * eps * std::sin(0.7 * k));
    }
    const auto report = bubble_residual(eps, pts, 100.0 * eps);
    worst = std::max(worst, report.max_residual);
    worst_ratio = std::max(worst_ratio, report.max_residual / report.max_residual_without_tail);
  }
  out.require(worst <= 1e-3, "max residual", worst);
  out.require(worst_ratio < 1.0, "with/without tail", worst_ratio);
}

void sphere_covariance(Outcome& out) {
  for (auto [n, alpha] : {std::pair{1, 2.0}, {2, 4.0}}) {
    const FlatFunction one{[](std::span<const double>) { return 1.0; }, 1.0};
    const FlatFunction smooth{[n](std::span<const double> x) {
                                const auto xi = inverse_projection(x);
                                return 1.0 + 0.3 * xi[n] + 0.2 * xi[0];
                              },
                              0.7};
    for (const auto* u : {&one, &smooth}) {
      const double coarse = verify_sphere_covariance(*u, n, alpha, default_covariance_options(n, 0)).max_discrepancy;
      const double fine = verify_sphere_covariance(*u, n, alpha, default_covariance_options(n, 1)).max_discrepancy;
      const std::string tag = "n=" + std::to_string(n) + (u == &one ? " u=1" : " smooth");
      out.require(coarse <= 1e-3, tag, coarse);
      out.require(fine < coarse, tag + " refined", fine);
    }
  }
}

void manifold_covariance(Outcome& out) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> phi_dist(0.5, 2.0);
  std::uniform_real_distribution<double> u_dist(0.1, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto m = random_manifold(20, 3, 1000 + k);
    ConformalFactor phi{std::vector<double>(20), 4.0, 3};
    std::vector<double> u(20);
    for (double& v : phi.phi) v = phi_dist(rng);
    for (double& v : u) v = u_dist(rng);
    worst = std::max(worst, verify_covariance_theorem(m, phi, u));
  }
  out.require(worst <= 1e-12, "random instances", worst);
  const auto vertices = six_hundred_cell_vertices();
  const std::size_t size = vertices.size() / 4;
  const auto sphere = sphere_sample_manifold(vertices, 3, std::vector<double>(size, 2 * pi * pi / size));
  ConformalFactor phi{std::vector<double>(size), 4.0, 3};
  std::vector<double> u(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double* xi = vertices.data() + 4 * i;
    phi.phi[i] = 1.0 + 0.3 * xi[3] + 0.1 * xi[0] * xi[1];
    u[i] = 2.0 + xi[2];
  }
  const double s3 = verify_covariance_theorem(sphere, phi, u);
  out.require(s3 <= 1e-12, "S^3 sample", s3);
}

void constant_solve(Outcome& out) {
  const FunctionalContext ctx(GridFunction::constant(build_grid(1, 256), 1.0), 2.0);
  SolverConfig cfg;
  cfg.tolerance = 1e-8;
  const auto report = minimize(ctx, cfg);
  out.require(report.converged, "converged", report.converged);
  out.require(report.el_residual <= 1e-8, "el_residual", report.el_residual);
  const double j_err = std::abs(report.J_value * pi * pi / 2 - 1.0);
  out.require(j_err <= 1e-6, "J rel err", j_err);
  double u_err = 0.0;
  for (double u : report.u_star.values()) u_err = std::max(u_err, std::abs(u / std::pow(2.0, 0.75) - 1.0));
  out.require(u_err <= 1e-6, "u rel err", u_err);
}

void circle_solve(Outcome& out) {
  const auto grid = build_grid(1, 512);
  const auto r = even_cos2(grid, 0.5);
  const FunctionalContext ctx(r, 2.0);
  SolverConfig cfg;
  cfg.tolerance = 1e-6;
  const auto report = minimize(ctx, cfg);
  out.require(report.converged, "converged", report.converged);
  out.require(report.el_residual <= 1e-6, "el_residual", report.el_residual);
  double asym = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    asym = std::max(asym, std::abs(report.u_star[i] - report.u_star[grid->antipode(i)]));
  }
  asym /= report.u_star.max();
  out.require(asym <= 1e-12, "u asymmetry", asym);
  const double ode = verify_ode_s1(report.u_star, r);
  out.require(ode <= 1e-3, "ODE residual", ode);
}

void s3_solve(Outcome& out) {
  const auto grid = build_grid(3, 16);
  const auto r = symmetrize(GridFunction::sample(
      grid, [](std::span<const double> x) { return 1.0 + 0.3 * spherical_harmonic(3, 2, 4, x); }));
  const FunctionalContext ctx(r, 4.0);
  SolverConfig cfg;
  cfg.tolerance = 1e-6;
  const auto report = minimize(ctx, cfg);
  out.require(report.converged, "converged", report.converged);
  out.require(report.el_residual <= 1e-4, "el_residual", report.el_residual);
  out.require(report.u_star.is_positive(), "min u", report.u_star.min());
  double asym = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    asym = std::max(asym, std::abs(report.u_star[i] - report.u_star[grid->antipode(i)]));
  }
  asym /= report.u_star.max();
  out.require(asym <= 1e-12, "u asymmetry", asym);
  out.require(true, "nodes", static_cast<double>(grid->size()));
}

void gradient_check(Outcome& out) {
  for (auto [n, res, alpha] : {std::tuple{1, 128, 2.0}, {2, 16, 4.0}}) {
    const auto grid = build_grid(n, res);
    const FunctionalContext ctx(symmetrize(GridFunction::sample(
                                    grid, [](std::span<const double> x) { return 1.0 + 0.4 * x[0] * x[0]; })),
                                alpha);
    std::mt19937_64 rng(31 + n);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto f = random_positive_field(grid, rng, 0.8, 4, false);
      const auto g = gradient_J(ctx, f);
      std::vector<double> v(grid->size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = normal(rng) * f[i];
      const double h = 1e-5;
      std::vector<double> plus(f.values().begin(), f.values().end());
      std::vector<double> minus = plus;
      double exact = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        plus[i] += h * v[i];
        minus[i] -= h * v[i];
        exact += grid->weight(i) * g[i] * v[i];
      }
      const double fd = (quotient_J(ctx, GridFunction(grid, plus)) - quotient_J(ctx, GridFunction(grid, minus))) / (2 * h);
      worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
    }
    out.require(worst <= 1e-6, "n=" + std::to_string(n) + " max rel err", worst);
  }
}

void reversed_hls(Outcome& out) {
  const auto grid = build_grid(1, 128);
  const FunctionalContext unit(GridFunction::constant(grid, 1.0), 2.0);
  const double c2 = hls_lower_bound(unit, 100, 5).constant;
  out.require(c2 > 0.0, "C2", c2);
  // Two non-constant weights with max R <= 1.
  const std::vector<GridFunction> weights{
      symmetrize(GridFunction::sample(grid, [](std::span<const double> x) { return 0.7 + 0.3 * (2 * x[0] * x[0] - 1); })),
      symmetrize(GridFunction::sample(grid, [](std::span<const double> x) {
        return 0.5 + 0.4 * std::pow(x[1], 4);
      }))};
  std::mt19937_64 rng(6);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : weights) {
    const FunctionalContext ctx(r, 2.0);
    const double bound = r.min() * r.min() * c2;
    for (int k = 0; k < 100; ++k) {
      const auto f = random_positive_field(grid, rng, 1.5, 6, false);
      worst = std::min(worst, quotient_J(ctx, f) / bound);
    }
  }
  out.require(worst >= 1 - 1e-6, "min J / ((min R)^2 C2)", worst);
}

void q_extraction(Outcome& out) {
  const auto vertices = six_hundred_cell_vertices();
  const std::size_t size = vertices.size() / 4;
  const auto sphere = sphere_sample_manifold(vertices, 3, std::vector<double>(size, 2 * pi * pi / size));
  const auto q = extract_Q_alpha(sphere, 4.0, {std::vector<double>(size, 1.0), 4.0, 3});
  double mean = 0.0;
  for (double v : q.q) mean += v / size;
  double var = 0.0;
  for (double v : q.q) var += (v - mean) * (v - mean) / size;
  out.require(std::sqrt(var) / mean <= 1e-6, "std/mean", std::sqrt(var) / mean);

  ConformalFactor phi{std::vector<double>(size), 4.0, 3};
  std::vector<double> q_true(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double* xi = vertices.data() + 4 * i;
    phi.phi[i] = 1.0 + 0.2 * xi[0] - 0.1 * xi[2] * xi[3];
    q_true[i] = 1.5 + 0.4 * xi[1] + 0.2 * xi[0] * xi[3];
  }
  const auto rhs = q_forward(sphere, 4.0, phi, q_true);
  const auto back = solve_Q_system(sphere, 4.0, phi, rhs, 1e-10);
  double err = 0.0;
  for (std::size_t i = 0; i < size; ++i) err = std::max(err, std::abs(back.q[i] / q_true[i] - 1.0));
  out.require(err <= 1e-6, "round trip rel err", err);
}

void coercivity(Outcome& out) {
  constexpr double delta0 = 0.3;
  for (auto [n, res, alpha] : {std::tuple{1, 256, 2.0}, {2, 32, 4.0}}) {
    const auto grid = build_grid(n, res);
    const auto r = symmetrize(GridFunction::sample(grid, [](std::span<const double> x) { return 1.0 + 0.4 * x[0] * x[0]; }));
    const FunctionalContext ctx(r, alpha);
    std::vector<double> pole(n + 1, 0.0);
    pole[0] = 1.0;
    double worst = std::numeric_limits<double>::infinity();
    for (double width : {0.05, 0.1, 0.2}) {
      const auto f = GridFunction::sample(grid, [&](std::span<const double> x) {
        const double a = std::acos(std::clamp(x[0], -1.0, 1.0));
        const double b = std::acos(std::clamp(-x[0], -1.0, 1.0));
        return 1e-8 + std::exp(-a * a / (2 * width * width)) + std::exp(-b * b / (2 * width * width));
      });
      const auto check = mass_bound_check(ctx, f, delta0, pole);
      if (!check.applies) {
        out.require(false, "two-cap mass precondition", std::min(check.pole_mass, check.antipode_mass));
        continue;
      }
      if (!check.holds) out.require(false, "bound violated, width", width);
      worst = std::min(worst, check.min_value / check.bound);
    }
    out.require(worst >= 1.0, "n=" + std::to_string(n) + " min(I f)/bound", worst);
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "normalization constants", 30, constants},
      {2, "stereographic distance identity", 1, distance_identity},
      {3, "bubble identity", 30, bubble},
      {4, "sphere covariance", 60, sphere_covariance},
      {5, "manifold covariance", 5, manifold_covariance},
      {6, "constant-R solve", 10, constant_solve},
      {7, "non-constant-R solve on S^1", 30, circle_solve},
      {8, "S^3 solve", 300, s3_solve},
      {9, "gradient correctness", 30, gradient_check},
      {10, "reversed HLS lower bound", 60, reversed_hls},
      {11, "Q extraction", 30, q_extraction},
      {12, "coercivity witness", 10, coercivity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail << " exception: " << e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool ok = out.passed && in_time;
    if (!ok) ++failures;
    std::printf("%s %2d %-32s %7.3fs/%gs  %s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, seconds, c.budget_seconds,
                out.detail.str().c_str(), in_time ? "" : " [over budget]");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
