#include "intcurv/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "intcurv/harmonics.hpp"
#include "intcurv/simd.hpp"

namespace intcurv {

namespace {

// One evaluation of J with the pieces the gradient reuses.
struct Evaluation {
  GridFunction f;
  GridFunction kf;
  double h = 0.0;
  double mass = 0.0;
  double J = 0.0;
};

Evaluation evaluate(const FunctionalContext& ctx, GridFunction f) {
  Evaluation e;
  e.kf = ctx.kernel().apply(f);
  const auto w = ctx.sphere().weights();
  const auto r = ctx.r().values();
  std::vector<double> rf(f.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    rf[i] = r[i] * f[i];
    mass += w[i] * r[i] * std::pow(f[i], ctx.p());
  }
  e.h = simd::weighted_dot(w, rf, e.kf.values());
  e.mass = mass;
  e.J = e.h / std::pow(mass, 2.0 / ctx.p());
  e.f = std::move(f);
  return e;
}

GridFunction gradient(const FunctionalContext& ctx, const Evaluation& e) {
  const double lambda = e.h / e.mass;
  const double scale = 2.0 / std::pow(e.mass, 2.0 / ctx.p());
  std::vector<double> g(e.f.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = scale * ctx.r()[i] * (e.kf[i] - lambda * std::pow(e.f[i], ctx.p() - 1.0));
  }
  return GridFunction(e.f.grid(), std::move(g));
}

double residual(const FunctionalContext& ctx, const Evaluation& e) {
  const double lambda = e.h / e.mass;
  double worst = 0.0;
  for (std::size_t i = 0; i < e.f.size(); ++i) {
    const double target = lambda * std::pow(e.f[i], ctx.q());
    worst = std::max(worst, std::abs(e.kf[i] - target) / target);
  }
  return worst;
}

double mean(const GridFunction& f) {
  return std::accumulate(f.values().begin(), f.values().end(), 0.0) / static_cast<double>(f.size());
}

struct Projection {
  GridFunction f;  // symmetrized and clamped, not yet normalized
  bool clamped = false;
};

Projection project(GridFunction f, const DescentParams& params) {
  if (params.symmetric) f = symmetrize(f);
  const double floor = params.positivity_floor * std::max(mean(f), 0.0);
  Projection out;
  for (double& v : f.values()) {
    if (!(v > floor)) {
      v = floor > 0.0 ? floor : std::numeric_limits<double>::min();
      out.clamped = true;
    }
  }
  out.f = std::move(f);
  return out;
}

// J(y) - J(f) from the increments of H and N. Near a critical point both
// relative increments are first order while their combination is second
// order, so differencing two rounded values of J loses everything once the
// residual falls below ~1e-8.
double change_in_J(const FunctionalContext& ctx, const Evaluation& e, const GridFunction& y,
                   const GridFunction& ky) {
  const auto w = ctx.sphere().weights();
  const auto r = ctx.r().values();
  const double p = ctx.p();
  double dh = 0.0;
  double dn = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - e.f[i];
    dh += w[i] * r[i] * (d * e.kf[i] + y[i] * (ky[i] - e.kf[i]));
    dn += w[i] * r[i] * std::pow(e.f[i], p) * std::expm1(p * std::log1p(d / e.f[i]));
  }
  return e.J * std::expm1(std::log1p(dh / e.h) - (2.0 / p) * std::log1p(dn / e.mass));
}

Evaluation normalized(const FunctionalContext& ctx, const GridFunction& y, const GridFunction& ky) {
  const double scale = 1.0 / weighted_p_norm(ctx, y);
  std::vector<double> f(y.values().begin(), y.values().end());
  std::vector<double> kf(ky.values().begin(), ky.values().end());
  for (double& v : f) v *= scale;
  for (double& v : kf) v *= scale;
  Evaluation e;
  e.f = GridFunction(y.grid(), std::move(f));
  e.kf = GridFunction(y.grid(), std::move(kf));
  const auto w = ctx.sphere().weights();
  const auto r = ctx.r().values();
  double h = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < e.f.size(); ++i) {
    h += w[i] * r[i] * e.f[i] * e.kf[i];
    mass += w[i] * r[i] * std::pow(e.f[i], ctx.p());
  }
  e.h = h;
  e.mass = mass;
  e.J = h / std::pow(mass, 2.0 / ctx.p());
  return e;
}

}  // namespace

GridFunction normalize(const FunctionalContext& ctx, const GridFunction& f) {
  const double norm = weighted_p_norm(ctx, f);
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x /= norm;
  return GridFunction(f.grid(), std::move(v));
}

DescentResult projected_gradient(const FunctionalContext& ctx, const GridFunction& f0,
                                 const DescentParams& params) {
  require_same_grid(ctx.r(), f0);
  if (params.max_iterations < 0) throw std::invalid_argument("projected_gradient: negative iteration cap");
  const auto w = ctx.sphere().weights();

  Projection start = project(f0, params);
  Evaluation current = evaluate(ctx, normalize(ctx, start.f));
  bool floor_active = start.clamped;
  GridFunction g = gradient(ctx, current);
  if (params.symmetric) g = symmetrize(g);

  DescentResult result;
  result.J_trace.push_back(current.J);
  double trace_value = current.J;
  double res = residual(ctx, current);
  double step = params.initial_step;
  std::vector<double> prev_f, prev_g;
  int it = 0;
  for (; it < params.max_iterations; ++it) {
    if (params.tolerance > 0.0 && res <= params.tolerance) break;
    const double g2 = simd::weighted_dot(w, g.values(), g.values());
    if (g2 == 0.0) break;

    if (!prev_f.empty()) {
      // Barzilai–Borwein (long) step from the last accepted move.
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double ds = current.f[i] - prev_f[i];
        const double dy = g[i] - prev_g[i];
        ss += w[i] * ds * ds;
        sy += w[i] * ds * dy;
      }
      if (sy > 0.0 && std::isfinite(ss / sy)) step = ss / sy;
    } else {
      // First move: limit the step so no node drops by more than half.
      double limit = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (g[i] > 0.0) limit = std::min(limit, 0.5 * current.f[i] / g[i]);
      }
      step = std::min(step, limit);
    }

    bool accepted = false;
    for (int bt = 0; bt <= params.max_backtracks; ++bt) {
      std::vector<double> trial(current.f.size());
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = current.f[i] - step * g[i];
      Projection proj = project(GridFunction(current.f.grid(), std::move(trial)), params);
      const GridFunction ky = ctx.kernel().apply(proj.f);
      const double dj = change_in_J(ctx, current, proj.f, ky);
      if (std::isfinite(dj) && dj <= -params.sufficient_decrease * step * g2) {
        prev_f.assign(current.f.values().begin(), current.f.values().end());
        prev_g.assign(g.values().begin(), g.values().end());
        current = normalized(ctx, proj.f, ky);
        floor_active = proj.clamped;
        accepted = true;
        trace_value += dj;
        break;
      }
      step *= params.shrink;
    }
    if (!accepted) break;

    g = gradient(ctx, current);
    if (params.symmetric) g = symmetrize(g);
    res = residual(ctx, current);
    result.J_trace.push_back(trace_value);
  }

  result.iterations = it;
  result.J = current.J;
  result.residual = res;
  result.converged = params.tolerance > 0.0 && res <= params.tolerance;
  result.floor_active = floor_active;
  result.f = std::move(current.f);
  return result;
}

GridFunction random_positive_field(const GridPtr& grid, std::mt19937_64& rng, double amplitude,
                                   int max_degree, bool symmetric) {
  const int n = grid->dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> log_values(grid->size(), 0.0);
  for (int degree = 1; degree <= max_degree; ++degree) {
    for (int index = 0; index < harmonic_count(n, degree); ++index) {
      const double coeff = amplitude * normal(rng) / degree;
      for (std::size_t i = 0; i < grid->size(); ++i) {
        log_values[i] += coeff * spherical_harmonic(n, degree, index, grid->point(i));
      }
    }
  }
  for (double& v : log_values) v = std::exp(v);
  GridFunction f(grid, std::move(log_values));
  return symmetric ? symmetrize(f) : f;
}

}  // namespace intcurv
