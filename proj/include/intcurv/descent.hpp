#pragma once

// Projected gradient descent on the quotient functional. Shared by the
// solver and by the reversed-HLS brute-force estimate.

#include <random>
#include <vector>

#include "intcurv/functional.hpp"

namespace intcurv {

struct DescentParams {
  int max_iterations = 2000;
  double tolerance = 1e-8;         // stop when el_residual <= tolerance (<= 0 disables)
  double positivity_floor = 1e-6;  // clamp at floor * mean(f)
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
  bool symmetric = true;           // symmetrize every iterate
};

struct DescentResult {
  GridFunction f;                  // normalized, ||f|| = 1
  double J = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> J_trace;     // J(f0), then J after each accepted step
  bool converged = false;
  bool floor_active = false;
};

// Scales f so that weighted_p_norm(ctx, f) == 1.
GridFunction normalize(const FunctionalContext& ctx, const GridFunction& f);

// Each iteration: Barzilai–Borwein trial step along -grad J, projection
// (symmetrize, clamp at the floor, normalize) and Armijo backtracking on J.
// The sufficient-decrease test uses J(new) - J(old) assembled from the
// increments of H and N rather than a difference of two rounded J values,
// and J_trace accumulates those increments, so the trace never increases
// even when the decrease is below the rounding level of J.
DescentResult projected_gradient(const FunctionalContext& ctx, const GridFunction& f0,
                                 const DescentParams& params);

// exp(sum of random harmonics of degree <= max_degree), symmetrized when
// `symmetric` is set. Strictly positive.
GridFunction random_positive_field(const GridPtr& grid, std::mt19937_64& rng, double amplitude,
                                   int max_degree, bool symmetric);

}  // namespace intcurv
