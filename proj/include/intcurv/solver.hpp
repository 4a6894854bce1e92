#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "intcurv/functional.hpp"

namespace intcurv {

enum class SolverMethod { projected_gradient, fixed_point, hybrid };

std::string to_string(SolverMethod method);
// Accepts "projected-gradient", "fixed-point", "hybrid".
SolverMethod parse_solver_method(const std::string& name);

struct StepControl {
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
};

struct SolverConfig {
  SolverMethod method = SolverMethod::projected_gradient;
  int max_iterations = 5000;
  double tolerance = 1e-8;
  double positivity_floor = 1e-6;
  StepControl step;
  int restarts = 1;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument on tolerance <= 0, a floor outside
  // (0, 1e-3], restarts < 1 or a negative iteration cap.
  void validate() const;
};

struct SolveReport {
  GridFunction f_star;     // normalized minimizer, antipodally symmetric
  GridFunction u_star;     // f_star rescaled to multiplier 1, raised to q
  double J_value = 0.0;
  double lambda = 0.0;     // H/N of f_star
  double el_residual = 0.0;
  int iterations = 0;
  std::vector<double> J_trace;
  bool converged = false;
  std::map<std::string, double> diagnostics;
};

// Minimizes J over positive antipodally symmetric grid functions. The first
// start is f = 1, the others symmetrized random positive fields. The best run
// has the smallest J; runs within 1e-10 relative are ranked by residual.
SolveReport minimize(const FunctionalContext& ctx, const SolverConfig& config);

// normalize(symmetrize((I f)^{(n+alpha)/(n-alpha)})).
GridFunction fixed_point_step(const FunctionalContext& ctx, const GridFunction& f);

// Rescales a critical f so that its multiplier is 1 and returns
// u = (t f)^{(n-alpha)/(n+alpha)}, t = lambda^{-(n+alpha)/(2 alpha)}.
// Throws std::runtime_error when el_residual(f) > tolerance.
GridFunction rescale_to_solution(const FunctionalContext& ctx, const GridFunction& f,
                                 double tolerance);

// max_i |u_i - (I_{alpha,R} u^{(n+alpha)/(n-alpha)})_i| / u_i
double solution_residual(const FunctionalContext& ctx, const GridFunction& u);

// On a uniform S^1 grid: max |u'' + u/4 - 2 R u^{-3}| / max(2 R u^{-3}) with
// u'' from trigonometric interpolation. Throws for other grids.
double verify_ode_s1(const GridFunction& u, const GridFunction& r);

struct MassBoundResult {
  bool applies = false;   // both antipodal caps carry mass >= 1/100
  bool holds = false;     // min_i (I f)_i >= bound (only meaningful if applies)
  double bound = 0.0;     // (min R) (sqrt 2 - delta0)^{alpha-n} / 100
  double min_value = 0.0;
  double pole_mass = 0.0;
  double antipode_mass = 0.0;
};

// Lower bound on I_{alpha,R} f implied by mass in the geodesic caps of
// radius delta0 around pole and -pole.
MassBoundResult mass_bound_check(const FunctionalContext& ctx, const GridFunction& f, double delta0,
                                 std::span<const double> pole);

}  // namespace intcurv
