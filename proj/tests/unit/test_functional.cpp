#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "intcurv/descent.hpp"
#include "intcurv/functional.hpp"
#include "intcurv/solver.hpp"

using namespace intcurv;

namespace {

constexpr double pi = std::numbers::pi;

GridFunction cos2(const GridPtr& grid, double amplitude) {
  return symmetrize(GridFunction::sample(
      grid, [amplitude](std::span<const double> x) { return 1.0 + amplitude * (2 * x[0] * x[0] - 1); }));
}

double weighted_inner(const GridFunction& a, const GridFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.grid()->weight(i) * a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("exponents") {
  const FunctionalContext ctx(GridFunction::constant(build_grid(3, 8), 1.0), 4.0);
  CHECK(ctx.p() == 6.0 / 7.0);
  CHECK(ctx.q() == ctx.p() - 1.0);
  CHECK(ctx.q() > -1.0);
  CHECK(ctx.q() < 0.0);
}

TEST_CASE("context validation") {
  const auto grid = build_grid(1, 16);
  CHECK_THROWS_AS(FunctionalContext(GridFunction::constant(grid, 1.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FunctionalContext(GridFunction::constant(grid, -1.0), 2.0), std::invalid_argument);
  const auto odd = GridFunction::sample(grid, [](std::span<const double> x) { return 1.0 + 0.5 * x[0]; });
  CHECK_THROWS_AS(FunctionalContext(odd, 2.0), std::invalid_argument);
}

TEST_CASE("closed-form values for constant functions on the circle") {
  const FunctionalContext ctx(GridFunction::constant(build_grid(1, 256), 1.0), 2.0);
  const auto one = GridFunction::constant(ctx.grid(), 1.0);
  CHECK(bilinear_H(ctx, one, one) == doctest::Approx(16 * pi).epsilon(1e-12));
  CHECK(weighted_p_norm(ctx, one) == doctest::Approx(std::pow(2 * pi, 1.5)).epsilon(1e-13));
  CHECK(quotient_J(ctx, one) == doctest::Approx(2 / (pi * pi)).epsilon(1e-12));
  CHECK(multiplier(ctx, one) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(el_residual(ctx, one) <= 1e-10);
  for (double g : gradient_J(ctx, one).values()) CHECK(std::abs(g) <= 1e-10);
  const auto zero = GridFunction::constant(ctx.grid(), 0.0);
  CHECK(bilinear_H(ctx, zero, zero) == 0.0);
  const auto three = GridFunction::constant(ctx.grid(), 3.0);
  CHECK(weighted_p_norm(ctx, three) == doctest::Approx(3.0 * std::pow(2 * pi, 1.5)).epsilon(1e-13));
}

TEST_CASE("homogeneity and scale invariance") {
  for (auto [n, res, alpha] : {std::tuple{1, 128, 2.0}, {2, 16, 4.0}, {3, 8, 4.0}}) {
    const auto grid = build_grid(n, res);
    const FunctionalContext ctx(symmetrize(GridFunction::sample(
                                    grid, [](std::span<const double> x) { return 1.2 + 0.3 * x[0] * x[0]; })),
                                alpha);
    std::mt19937_64 rng(5);
    const auto f = random_positive_field(grid, rng, 0.8, 3, false);
    CHECK(weighted_p_norm(ctx, GridFunction(grid, [&] {
            std::vector<double> v(f.values().begin(), f.values().end());
            for (double& x : v) x *= 3.7;
            return v;
          }())) == doctest::Approx(3.7 * weighted_p_norm(ctx, f)).epsilon(1e-13));
    const double j = quotient_J(ctx, f);
    const double r = el_residual(ctx, f);
    CHECK(r > 0.0);
    for (double t : {1e-3, 1.0, 1e3, 5.0}) {
      std::vector<double> v(f.values().begin(), f.values().end());
      for (double& x : v) x *= t;
      const GridFunction tf(grid, v);
      CHECK(std::abs(quotient_J(ctx, tf) - j) <= 1e-12 * j);
      CHECK(std::abs(el_residual(ctx, tf) - r) <= 1e-12 * r);
    }
    const auto g = random_positive_field(grid, rng, 0.8, 3, false);
    CHECK(bilinear_H(ctx, f, g) == doctest::Approx(bilinear_H(ctx, g, f)).epsilon(1e-12));
  }
}

TEST_CASE("gradient matches central differences") {
  for (auto [n, res, alpha] : {std::tuple{1, 64, 2.0}, {2, 12, 4.0}}) {
    const auto grid = build_grid(n, res);
    const FunctionalContext ctx(symmetrize(GridFunction::sample(
                                    grid, [](std::span<const double> x) { return 1.0 + 0.4 * x[1] * x[1]; })),
                                alpha);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto f = random_positive_field(grid, rng, 0.8, 3, false);
      std::vector<double> v(grid->size());
      for (double& x : v) x = normal(rng);
      const double h = 1e-5;
      std::vector<double> plus(f.values().begin(), f.values().end());
      std::vector<double> minus = plus;
      for (std::size_t i = 0; i < v.size(); ++i) {
        plus[i] += h * v[i] * f[i];
        minus[i] -= h * v[i] * f[i];
        v[i] *= f[i];
      }
      const double fd = (quotient_J(ctx, GridFunction(grid, plus)) - quotient_J(ctx, GridFunction(grid, minus))) / (2 * h);
      const double exact = weighted_inner(gradient_J(ctx, f), GridFunction(grid, v));
      worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
    }
    CAPTURE(n);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("symmetric inputs give a symmetric gradient") {
  const auto grid = build_grid(2, 16);
  const FunctionalContext ctx(GridFunction::constant(grid, 1.0), 4.0);
  std::mt19937_64 rng(2);
  const auto f = random_positive_field(grid, rng, 0.5, 4, true);
  const auto g = gradient_J(ctx, f);
  CHECK(is_antipodally_symmetric(g, 1e-12));
}

TEST_CASE("non-positive input is rejected") {
  const FunctionalContext ctx(GridFunction::constant(build_grid(1, 16), 1.0), 2.0);
  auto f = GridFunction::constant(ctx.grid(), 1.0);
  f[3] = 0.0;
  CHECK_THROWS_AS(p_mass(ctx, f), std::invalid_argument);
  CHECK_THROWS_AS(quotient_J(ctx, f), std::invalid_argument);
  CHECK_THROWS_AS(gradient_J(ctx, f), std::invalid_argument);
  CHECK_THROWS_AS(el_residual(ctx, f), std::invalid_argument);
}

TEST_CASE("weak form at a critical point") {
  const auto grid = build_grid(1, 256);
  const FunctionalContext ctx(cos2(grid, 0.5), 2.0);
  SolverConfig cfg;
  cfg.tolerance = 1e-10;
  const auto report = minimize(ctx, cfg);
  REQUIRE(report.el_residual <= 1e-8);
  // Multiplier-one representative f = u^{1/q}.
  std::vector<double> fv(grid->size());
  for (std::size_t i = 0; i < fv.size(); ++i) fv[i] = std::pow(report.u_star[i], 1.0 / ctx.q());
  const GridFunction f(grid, fv);
  CHECK(multiplier(ctx, f) == doctest::Approx(1.0).epsilon(1e-8));
  const auto basis = default_test_basis(grid);
  CHECK(weak_form_test(ctx, f, {GridFunction::constant(grid, 1.0)}) <= 1e-8);
  CHECK(weak_form_test(ctx, f, basis) <= 1e-6);

  std::mt19937_64 rng(4);
  auto g = random_positive_field(grid, rng, 0.8, 4, true);
  const double lambda = multiplier(ctx, g);
  std::vector<double> scaled(g.values().begin(), g.values().end());
  for (double& x : scaled) x *= std::pow(lambda, -(1.0 + 2.0) / (2.0 * 2.0));
  CHECK(weak_form_test(ctx, GridFunction(grid, scaled), basis) > 1e-3);
}

TEST_CASE("test basis contents") {
  const auto grid = build_grid(2, 12);
  const auto basis = default_test_basis(grid, 2);
  // 1 + 3 + 5 harmonics and two caps per coordinate axis.
  CHECK(basis.size() == 9 + 6);
  for (const auto& phi : basis) CHECK(phi.grid() == grid);
}

TEST_CASE("reversed HLS oracle") {
  const auto grid = build_grid(1, 64);
  const FunctionalContext ctx(GridFunction::constant(grid, 1.0), 2.0);
  const auto est = hls_lower_bound(ctx, 100, 3);
  CHECK(est.per_trial.size() == 100);
  CHECK(est.constant > 0.0);
  CHECK(est.constant <= quotient_J(ctx, GridFunction::constant(grid, 1.0)) * (1 + 1e-12));
  CHECK(est.constant == doctest::Approx(2 / (pi * pi)).epsilon(1e-6));

  std::mt19937_64 rng(99);
  for (int k = 0; k < 100; ++k) {
    const auto f = random_positive_field(grid, rng, 1.5, 6, false);
    CHECK(quotient_J(ctx, f) >= est.constant * (1 - 1e-6));
  }
  const FunctionalContext not_one(GridFunction::constant(grid, 2.0), 2.0);
  CHECK_THROWS_AS(hls_lower_bound(not_one, 100, 3), std::invalid_argument);
}

TEST_CASE("lower bound with a weight below one, and a counterexample above one") {
  const auto grid = build_grid(1, 64);
  const FunctionalContext unit(GridFunction::constant(grid, 1.0), 2.0);
  const double c2 = hls_lower_bound(unit, 100, 8).constant;
  const FunctionalContext weighted(cos2(grid, 0.5), 2.0);  // R in [0.5, 1.5], max R > 1
  const auto small_r = GridFunction::sample(grid, [](std::span<const double> x) { return 0.6 + 0.3 * x[0] * x[0]; });
  const FunctionalContext below(symmetrize(small_r), 2.0);
  std::mt19937_64 rng(12);
  for (int k = 0; k < 100; ++k) {
    const auto f = random_positive_field(grid, rng, 1.5, 6, false);
    const double min_r = below.r().min();
    CHECK(quotient_J(below, f) >= min_r * min_r * c2 * (1 - 1e-6));
  }
  // R = 2: J_R(1) = J_1(1) / 2 < (min R)^2 C2 = 4 C2.
  const FunctionalContext doubled(GridFunction::constant(grid, 2.0), 2.0);
  const double j = quotient_J(doubled, GridFunction::constant(grid, 1.0));
  CHECK(j == doctest::Approx(1 / (pi * pi)).epsilon(1e-10));
  CHECK(j < 4.0 * c2);
}
