#pragma once

#include <cstdint>
#include <vector>

#include "intcurv/kernel_ops.hpp"
#include "intcurv/sphere_grid.hpp"

namespace intcurv {

/// Everything the quotient functional needs for one (grid, alpha, R).
///
/// p = 2n/(n+alpha) lies in (0,1) and q = p - 1 = (n-alpha)/(n+alpha) lies in
/// (-1,0); both are fixed by n and alpha.
class FunctionalContext {
 public:
  // Throws std::invalid_argument unless alpha > n, R > 0 everywhere and R is
  // antipodally symmetric to 1e-12.
  FunctionalContext(GridFunction r, double alpha, DiagonalRule rule = DiagonalRule::subtracted);

  const GridPtr& grid() const { return r_.grid(); }
  const SphereGrid& sphere() const { return *r_.grid(); }
  const GridFunction& r() const { return r_; }
  const KernelOperator& kernel() const { return kernel_; }
  double alpha() const { return alpha_; }
  int n() const { return r_.grid()->dim(); }
  double p() const { return p_; }
  double q() const { return q_; }

 private:
  GridFunction r_;
  double alpha_;
  double p_;
  double q_;
  KernelOperator kernel_;
};

// sum_i w_i R_i f_i (I_{alpha,R} g)_i
double bilinear_H(const FunctionalContext& ctx, const GridFunction& f, const GridFunction& g);

// N(f) = sum_i w_i R_i f_i^p. Throws on non-positive f.
double p_mass(const FunctionalContext& ctx, const GridFunction& f);

// N(f)^{1/p}. Positively homogeneous of degree 1; not a norm (p < 1).
double weighted_p_norm(const FunctionalContext& ctx, const GridFunction& f);

// H(f,f) / ||f||^2; scale invariant.
double quotient_J(const FunctionalContext& ctx, const GridFunction& f);

// Gradient of J in the grid's weighted inner product:
//   (2 / N^{2/p}) R [ I f - (H/N) f^{p-1} ].
GridFunction gradient_J(const FunctionalContext& ctx, const GridFunction& f);

// Euler–Lagrange multiplier H(f,f)/N(f).
double multiplier(const FunctionalContext& ctx, const GridFunction& f);

// max_i |(I f)_i - lambda f_i^q| / (lambda f_i^q), lambda = H/N.
double el_residual(const FunctionalContext& ctx, const GridFunction& f);

// Test functions for weak_form_test: every spherical harmonic of degree
// <= max_degree plus smoothed indicator functions of caps around the
// coordinate poles.
std::vector<GridFunction> default_test_basis(const GridPtr& grid, int max_degree = 4);

// For each phi: |LHS - RHS| / max(|LHS| + |RHS|, 1e-6 sum w f^q R |phi|) with
//   LHS = sum w f^q R phi,  RHS = sum w R phi (I f).
// The floor keeps test functions on which both sides vanish (odd phi, even f)
// from reporting rounding noise. Returns the maximum. f must already carry multiplier 1.
double weak_form_test(const FunctionalContext& ctx, const GridFunction& f,
                      const std::vector<GridFunction>& test_basis);

struct HlsEstimate {
  double constant = 0.0;           // smallest J found
  std::vector<double> per_trial;   // final J of each start
};

// Brute-force upper estimate of the discrete reversed-HLS constant: minimize
// J over positive (not necessarily symmetric) f from `trials` random starts.
// ctx.r() must be identically 1.
HlsEstimate hls_lower_bound(const FunctionalContext& ctx, int trials, std::uint64_t seed,
                            int iterations_per_trial = 200);

}  // namespace intcurv
