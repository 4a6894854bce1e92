#pragma once

#include <span>
#include <vector>

#include "intcurv/sphere_grid.hpp"

namespace intcurv {

// Euclidean distance in R^{n+1}.
double chordal_distance(std::span<const double> xi, std::span<const double> eta);

// c_{n,alpha} with c^{-1} = \int_{S^n} |xi - eta|^{alpha-n} dS_eta
//   = 2^{alpha-1} |S^{n-1}| Gamma(n/2) Gamma(alpha/2) / Gamma((n+alpha)/2).
// Requires alpha > 0 and alpha != n.
double normalization_constant(int n, double alpha);

// Direct quadrature of \int_{S^n} |xi - eta|^{alpha-n} dS_eta. The integral
// is reduced to the polar angle t about xi and integrated with `nodes`
// Gauss–Legendre points after the substitution t = pi v^2, which removes the
// endpoint singularity of the kernel. No Gamma functions are involved.
double direct_kernel_integral(int n, double alpha, int nodes = 64);

// How the diagonal node of the Nyström rule is treated.
//   zero:       A_ii = 0 (the kernel vanishes at zero distance for alpha > n).
//   subtracted: singularity subtraction; the row integrates the kernel
//               exactly against constants, A_ii = R_i (c^{-1} - sum_{j!=i} k_ij w_j).
// The plain rule converges only like h^{alpha-n+1}; subtraction gains two
// orders for smooth densities.
enum class DiagonalRule { zero, subtracted };

/// Dense Nyström matrix of f -> \int R(eta) f(eta) |xi - eta|^{alpha-n} dS_eta.
/// Off-diagonal entries are A_ij = R_j |xi_i - xi_j|^{alpha-n} w_j.
class KernelOperator {
 public:
  const GridPtr& grid() const { return r_.grid(); }
  double alpha() const { return alpha_; }
  const GridFunction& weight_function() const { return r_; }
  DiagonalRule diagonal_rule() const { return rule_; }
  std::size_t size() const { return r_.size(); }

  double entry(std::size_t i, std::size_t j) const { return matrix_[i * size() + j]; }
  // Row-major size() x size().
  std::span<const double> matrix() const { return matrix_; }

  GridFunction apply(const GridFunction& f) const;

 private:
  friend KernelOperator assemble_kernel_unchecked(const GridFunction& r, double alpha,
                                                  DiagonalRule rule);
  GridFunction r_;
  double alpha_ = 0.0;
  DiagonalRule rule_ = DiagonalRule::subtracted;
  std::vector<double> matrix_;
};

// Requires alpha > n and R > 0 at every node; throws std::invalid_argument.
KernelOperator assemble_kernel(const GridFunction& r, double alpha,
                               DiagonalRule rule = DiagonalRule::subtracted);

// Same assembly without the alpha > n / positivity checks; used for the
// normalized operator, which also accepts 0 < alpha < n.
KernelOperator assemble_kernel_unchecked(const GridFunction& r, double alpha, DiagonalRule rule);

GridFunction apply_operator(const KernelOperator& k, const GridFunction& f);

// c_{n,alpha} sum_j |xi_i - xi_j|^{alpha-n} h_j w_j (with the chosen diagonal rule).
GridFunction apply_tilde_I(const GridFunction& h, double alpha,
                           DiagonalRule rule = DiagonalRule::subtracted);

}  // namespace intcurv
