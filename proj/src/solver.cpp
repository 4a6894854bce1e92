#include "intcurv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "intcurv/descent.hpp"

namespace intcurv {

std::string to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::projected_gradient: return "projected-gradient";
    case SolverMethod::fixed_point: return "fixed-point";
    case SolverMethod::hybrid: return "hybrid";
  }
  return "unknown";
}

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "projected-gradient") return SolverMethod::projected_gradient;
  if (name == "fixed-point") return SolverMethod::fixed_point;
  if (name == "hybrid") return SolverMethod::hybrid;
  throw std::invalid_argument("unknown solver method '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("solver: tolerance must be positive");
  if (!(positivity_floor > 0.0) || positivity_floor > 1e-3) {
    throw std::invalid_argument("solver: positivity_floor must lie in (0, 1e-3]");
  }
  if (restarts < 1) throw std::invalid_argument("solver: restarts must be at least 1");
  if (max_iterations < 0) throw std::invalid_argument("solver: max_iterations must be >= 0");
  if (!(step.initial_step > 0.0) || !(step.shrink > 0.0 && step.shrink < 1.0) ||
      !(step.sufficient_decrease > 0.0 && step.sufficient_decrease < 1.0)) {
    throw std::invalid_argument("solver: invalid step control");
  }
}

GridFunction fixed_point_step(const FunctionalContext& ctx, const GridFunction& f) {
  require_same_grid(ctx.r(), f);
  if (!f.is_positive()) throw std::invalid_argument("fixed_point_step: f must be positive");
  GridFunction kf = ctx.kernel().apply(f);
  const double exponent = 1.0 / ctx.q();
  for (double& v : kf.values()) v = std::pow(v, exponent);
  return normalize(ctx, symmetrize(kf));
}

GridFunction rescale_to_solution(const FunctionalContext& ctx, const GridFunction& f, double tolerance) {
  const double res = el_residual(ctx, f);
  if (!(res <= tolerance)) {
    throw std::runtime_error("rescale_to_solution: Euler-Lagrange residual " + std::to_string(res) +
                             " exceeds tolerance " + std::to_string(tolerance));
  }
  const double lambda = multiplier(ctx, f);
  const double t = std::pow(lambda, -(ctx.n() + ctx.alpha()) / (2.0 * ctx.alpha()));
  std::vector<double> u(f.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow(t * f[i], ctx.q());
  return GridFunction(f.grid(), std::move(u));
}

double solution_residual(const FunctionalContext& ctx, const GridFunction& u) {
  require_same_grid(ctx.r(), u);
  std::vector<double> f(u.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(u[i], 1.0 / ctx.q());
  const GridFunction kf = ctx.kernel().apply(GridFunction(u.grid(), std::move(f)));
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i] - kf[i]) / u[i]);
  return worst;
}

namespace {

struct Run {
  DescentResult descent;
  int restart = 0;
};

DescentParams descent_params(const SolverConfig& config, int iterations) {
  DescentParams params;
  params.max_iterations = iterations;
  params.tolerance = config.tolerance;
  params.positivity_floor = config.positivity_floor;
  params.initial_step = config.step.initial_step;
  params.shrink = config.step.shrink;
  params.sufficient_decrease = config.step.sufficient_decrease;
  params.symmetric = true;
  return params;
}

// Plain Euler–Lagrange iteration; keeps the iterate with the smallest residual.
DescentResult run_fixed_point(const FunctionalContext& ctx, const GridFunction& start,
                              const SolverConfig& config, int iterations) {
  DescentResult out;
  GridFunction f = normalize(ctx, symmetrize(start));
  double res = el_residual(ctx, f);
  GridFunction best = f;
  double best_res = res;
  out.J_trace.push_back(quotient_J(ctx, f));
  int it = 0;
  for (; it < iterations && res > config.tolerance; ++it) {
    GridFunction next = fixed_point_step(ctx, f);
    if (!next.is_positive()) break;
    f = std::move(next);
    res = el_residual(ctx, f);
    if (!std::isfinite(res)) break;
    out.J_trace.push_back(quotient_J(ctx, f));
    if (res < best_res) {
      best_res = res;
      best = f;
    }
  }
  out.iterations = it;
  out.f = std::move(best);
  out.residual = best_res;
  out.J = quotient_J(ctx, out.f);
  out.converged = best_res <= config.tolerance;
  out.floor_active = false;
  return out;
}

DescentResult run_once(const FunctionalContext& ctx, const GridFunction& start, const SolverConfig& config) {
  switch (config.method) {
    case SolverMethod::projected_gradient:
      return projected_gradient(ctx, start, descent_params(config, config.max_iterations));
    case SolverMethod::fixed_point:
      return run_fixed_point(ctx, start, config, config.max_iterations);
    case SolverMethod::hybrid: {
      const int warm = std::min(config.max_iterations, 50);
      DescentResult first = run_fixed_point(ctx, start, config, warm);
      if (first.converged) return first;
      DescentResult polish =
          projected_gradient(ctx, first.f, descent_params(config, config.max_iterations - warm));
      polish.iterations += first.iterations;
      first.J_trace.insert(first.J_trace.end(), polish.J_trace.begin(), polish.J_trace.end());
      polish.J_trace = std::move(first.J_trace);
      return polish;
    }
  }
  throw std::logic_error("unreachable solver method");
}

bool better(const Run& a, const Run& b) {
  const double scale = std::max(std::abs(a.descent.J), std::abs(b.descent.J));
  if (std::abs(a.descent.J - b.descent.J) <= 1e-10 * scale) return a.descent.residual < b.descent.residual;
  return a.descent.J < b.descent.J;
}

}  // namespace

SolveReport minimize(const FunctionalContext& ctx, const SolverConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::vector<Run> runs;
  for (int r = 0; r < config.restarts; ++r) {
    const GridFunction start = r == 0 ? GridFunction::constant(ctx.grid(), 1.0)
                                      : random_positive_field(ctx.grid(), rng, 0.5, 4, true);
    runs.push_back({run_once(ctx, start, config), r});
  }
  const Run& best = *std::min_element(runs.begin(), runs.end(), better);

  SolveReport report;
  report.f_star = best.descent.f;
  report.J_value = best.descent.J;
  report.lambda = multiplier(ctx, report.f_star);
  report.el_residual = el_residual(ctx, report.f_star);
  report.iterations = best.descent.iterations;
  report.J_trace = best.descent.J_trace;
  report.converged = report.el_residual <= config.tolerance;

  const double t = std::pow(report.lambda, -(ctx.n() + ctx.alpha()) / (2.0 * ctx.alpha()));
  std::vector<double> u(report.f_star.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow(t * report.f_star[i], ctx.q());
  report.u_star = GridFunction(ctx.grid(), std::move(u));

  double asym = 0.0;
  for (std::size_t i = 0; i < report.f_star.size(); ++i) {
    asym = std::max(asym, std::abs(report.f_star[i] - report.f_star[ctx.sphere().antipode(i)]));
  }
  double j_min = best.descent.J, j_max = best.descent.J;
  int converged_runs = 0;
  for (const Run& run : runs) {
    j_min = std::min(j_min, run.descent.J);
    j_max = std::max(j_max, run.descent.J);
    converged_runs += run.descent.converged ? 1 : 0;
  }
  report.diagnostics["best_restart"] = best.restart;
  report.diagnostics["floor_active"] = best.descent.floor_active ? 1.0 : 0.0;
  report.diagnostics["antipodal_asymmetry"] = asym / report.f_star.max();
  report.diagnostics["solution_residual"] = solution_residual(ctx, report.u_star);
  report.diagnostics["restart_J_spread"] = (j_max - j_min) / std::abs(j_min);
  report.diagnostics["converged_restarts"] = converged_runs;
  report.diagnostics["min_f"] = report.f_star.min();
  report.diagnostics["max_f"] = report.f_star.max();
  return report;
}

double verify_ode_s1(const GridFunction& u, const GridFunction& r) {
  require_same_grid(u, r);
  const SphereGrid& grid = *u.grid();
  if (!grid.is_uniform_circle()) throw std::invalid_argument("verify_ode_s1: needs a uniform S^1 grid");
  const std::size_t m = grid.size();
  constexpr double pi = std::numbers::pi;

  // Trigonometric interpolation: DFT, multiply by -k^2, inverse DFT. The
  // shift by u[0] only touches the k = 0 mode and keeps constants exact.
  std::vector<std::complex<double>> twiddle(m);
  for (std::size_t j = 0; j < m; ++j) twiddle[j] = std::polar(1.0, -2.0 * pi * j / m);
  std::vector<std::complex<double>> coeff(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += (u[j] - u[0]) * twiddle[(k * j) % m];
    coeff[k] = acc / static_cast<double>(m);
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double wave = k <= m / 2 ? static_cast<double>(k) : static_cast<double>(k) - m;
    coeff[k] *= -wave * wave;
  }
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += coeff[k] * std::conj(twiddle[(k * j) % m]);
    const double u_tt = acc.real();
    const double source = 2.0 * r[j] / (u[j] * u[j] * u[j]);
    worst = std::max(worst, std::abs(u_tt + 0.25 * u[j] - source));
    scale = std::max(scale, source);
  }
  return worst / scale;
}

MassBoundResult mass_bound_check(const FunctionalContext& ctx, const GridFunction& f, double delta0,
                                 std::span<const double> pole) {
  require_same_grid(ctx.r(), f);
  if (!(delta0 > 0.0) || !(delta0 < std::numbers::sqrt2)) {
    throw std::invalid_argument("mass_bound_check: delta0 must lie in (0, sqrt 2)");
  }
  const SphereGrid& grid = ctx.sphere();
  if (pole.size() != static_cast<std::size_t>(grid.ambient_dim())) {
    throw std::invalid_argument("mass_bound_check: pole has wrong dimension");
  }
  MassBoundResult out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double c = 0.0;
    const auto x = grid.point(i);
    for (std::size_t k = 0; k < x.size(); ++k) c += x[k] * pole[k];
    c = std::clamp(c, -1.0, 1.0);
    if (std::acos(c) <= delta0) out.pole_mass += grid.weight(i) * f[i];
    if (std::acos(-c) <= delta0) out.antipode_mass += grid.weight(i) * f[i];
  }
  out.bound = ctx.r().min() * std::pow(std::numbers::sqrt2 - delta0, ctx.alpha() - ctx.n()) / 100.0;
  const GridFunction kf = ctx.kernel().apply(f);
  out.min_value = kf.min();
  out.applies = out.pole_mass >= 0.01 && out.antipode_mass >= 0.01;
  out.holds = out.applies && out.min_value >= out.bound;
  return out;
}

}  // namespace intcurv
