#include "intcurv/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "intcurv/descent.hpp"
#include "intcurv/harmonics.hpp"
#include "intcurv/simd.hpp"

namespace intcurv {

namespace {

void require_positive(const GridFunction& f, const char* what) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0.0)) {
      throw std::invalid_argument(std::string(what) + ": f must be positive (node " +
                                  std::to_string(i) + " has " + std::to_string(f[i]) + ")");
    }
  }
}

const GridFunction& validated_r(const GridFunction& r, double alpha) {
  if (!r.grid()) throw std::invalid_argument("FunctionalContext: R has no grid");
  if (!(alpha > r.grid()->dim())) throw std::invalid_argument("FunctionalContext: alpha must exceed n");
  require_positive(r, "FunctionalContext (R)");
  if (!is_antipodally_symmetric(r, 1e-12)) {
    throw std::invalid_argument("FunctionalContext: R is not antipodally symmetric");
  }
  return r;
}

}  // namespace

FunctionalContext::FunctionalContext(GridFunction r, double alpha, DiagonalRule rule)
    : r_(validated_r(r, alpha)),
      alpha_(alpha),
      p_(2.0 * r_.grid()->dim() / (r_.grid()->dim() + alpha)),
      q_(p_ - 1.0),
      kernel_(assemble_kernel(r_, alpha, rule)) {}

double bilinear_H(const FunctionalContext& ctx, const GridFunction& f, const GridFunction& g) {
  require_same_grid(ctx.r(), f);
  require_same_grid(ctx.r(), g);
  const GridFunction kg = ctx.kernel().apply(g);
  std::vector<double> rf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rf[i] = ctx.r()[i] * f[i];
  return simd::weighted_dot(ctx.sphere().weights(), rf, kg.values());
}

double p_mass(const FunctionalContext& ctx, const GridFunction& f) {
  require_same_grid(ctx.r(), f);
  require_positive(f, "p_mass");
  const auto w = ctx.sphere().weights();
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) total += w[i] * ctx.r()[i] * std::pow(f[i], ctx.p());
  return total;
}

double weighted_p_norm(const FunctionalContext& ctx, const GridFunction& f) {
  return std::pow(p_mass(ctx, f), 1.0 / ctx.p());
}

double quotient_J(const FunctionalContext& ctx, const GridFunction& f) {
  const double norm = weighted_p_norm(ctx, f);
  return bilinear_H(ctx, f, f) / (norm * norm);
}

double multiplier(const FunctionalContext& ctx, const GridFunction& f) {
  return bilinear_H(ctx, f, f) / p_mass(ctx, f);
}

GridFunction gradient_J(const FunctionalContext& ctx, const GridFunction& f) {
  const double mass = p_mass(ctx, f);
  const GridFunction kf = ctx.kernel().apply(f);
  std::vector<double> rf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rf[i] = ctx.r()[i] * f[i];
  const double h = simd::weighted_dot(ctx.sphere().weights(), rf, kf.values());
  const double lambda = h / mass;
  const double scale = 2.0 / std::pow(mass, 2.0 / ctx.p());
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    g[i] = scale * ctx.r()[i] * (kf[i] - lambda * std::pow(f[i], ctx.p() - 1.0));
  }
  return GridFunction(f.grid(), std::move(g));
}

double el_residual(const FunctionalContext& ctx, const GridFunction& f) {
  const double lambda = multiplier(ctx, f);
  const GridFunction kf = ctx.kernel().apply(f);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double target = lambda * std::pow(f[i], ctx.q());
    worst = std::max(worst, std::abs(kf[i] - target) / target);
  }
  return worst;
}

std::vector<GridFunction> default_test_basis(const GridPtr& grid, int max_degree) {
  const int n = grid->dim();
  std::vector<GridFunction> basis;
  for (int degree = 0; degree <= max_degree; ++degree) {
    for (int index = 0; index < harmonic_count(n, degree); ++index) {
      basis.push_back(GridFunction::sample(
          grid, [&](std::span<const double> x) { return spherical_harmonic(n, degree, index, x); }));
    }
  }
  // Smoothed caps of geodesic radius 0.6 around +-e_k.
  constexpr double radius = 0.6;
  constexpr double width = 0.1;
  for (int axis = 0; axis <= n; ++axis) {
    for (double sign : {1.0, -1.0}) {
      basis.push_back(GridFunction::sample(grid, [&](std::span<const double> x) {
        const double angle = std::acos(std::clamp(sign * x[axis], -1.0, 1.0));
        return 1.0 / (1.0 + std::exp((angle - radius) / width));
      }));
    }
  }
  return basis;
}

double weak_form_test(const FunctionalContext& ctx, const GridFunction& f,
                      const std::vector<GridFunction>& test_basis) {
  require_same_grid(ctx.r(), f);
  require_positive(f, "weak_form_test");
  const auto w = ctx.sphere().weights();
  const GridFunction kf = ctx.kernel().apply(f);
  std::vector<double> lhs_density(f.size()), rhs_density(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    lhs_density[i] = std::pow(f[i], ctx.q()) * ctx.r()[i];
    rhs_density[i] = ctx.r()[i] * kf[i];
  }
  double worst = 0.0;
  std::vector<double> magnitude(f.size());
  for (const GridFunction& phi : test_basis) {
    require_same_grid(f, phi);
    const double lhs = simd::weighted_dot(w, lhs_density, phi.values());
    const double rhs = simd::weighted_dot(w, rhs_density, phi.values());
    // Test functions orthogonal to both sides (odd harmonics against an even
    // f) would otherwise divide rounding noise by rounding noise.
    for (std::size_t i = 0; i < f.size(); ++i) magnitude[i] = std::abs(phi[i]);
    const double floor = 1e-6 * simd::weighted_dot(w, lhs_density, magnitude);
    const double scale = std::max(std::abs(lhs) + std::abs(rhs), floor);
    if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

HlsEstimate hls_lower_bound(const FunctionalContext& ctx, int trials, std::uint64_t seed,
                            int iterations_per_trial) {
  for (double v : ctx.r().values()) {
    if (v != 1.0) throw std::invalid_argument("hls_lower_bound: requires R identically 1");
  }
  if (trials < 1) throw std::invalid_argument("hls_lower_bound: trials must be positive");
  std::mt19937_64 rng(seed);
  DescentParams params;
  params.max_iterations = iterations_per_trial;
  params.tolerance = 1e-10;
  params.symmetric = false;
  HlsEstimate estimate;
  estimate.constant = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const GridFunction start = random_positive_field(ctx.grid(), rng, 0.8, 4, false);
    const DescentResult run = projected_gradient(ctx, start, params);
    estimate.per_trial.push_back(run.J);
    estimate.constant = std::min(estimate.constant, run.J);
  }
  return estimate;
}

}  // namespace intcurv
