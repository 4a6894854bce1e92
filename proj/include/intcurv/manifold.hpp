#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace intcurv {

/// A finite sample of a compact manifold (M^n, g0): node volumes dV_{g0} and
/// a symmetric Green matrix with positive off-diagonal entries. The diagonal
/// of the Green matrix is never read.
struct DiscreteManifold {
  int n = 3;
  std::vector<double> volumes;
  std::vector<double> green;        // row-major, size() x size()
  std::vector<double> coordinates;  // optional, row-major with `coordinate_dim` columns
  int coordinate_dim = 0;

  std::size_t size() const { return volumes.size(); }
  double g(std::size_t y, std::size_t x) const { return green[y * size() + x]; }

  // Throws std::invalid_argument when n == 2, shapes disagree, volumes are not
  // positive or the Green matrix is not symmetric with positive off-diagonal.
  void validate() const;
};

struct ConformalFactor {
  std::vector<double> phi;
  double alpha = 4.0;
  int n = 3;
};

// G1_{yx} = phi_y^{-1} phi_x^{-1} G0_{yx}.
std::vector<double> conformal_green(const DiscreteManifold& m, const ConformalFactor& phi);

// x -> sum_{y != x} G_{yx}^{(alpha-n)/(2-n)} f_y V_y.
std::vector<double> manifold_operator(const DiscreteManifold& m, double alpha,
                                      std::span<const double> f, std::span<const double> volumes);

struct CovarianceSides {
  std::vector<double> rescaled_metric;   // operator of g1 applied to u
  std::vector<double> background_metric; // phi^{(a-n)/(n-2)} I_{g0}(phi^{2n/(n-a)+(a-n)/(n-2)} u)
  double max_discrepancy = 0.0;
};

// Left side: operator built from G1 = conformal_green and dV1 = phi^{2n/(n-a)} dV0.
// Right side: the background operator with the conformal weights moved out.
CovarianceSides covariance_sides(const DiscreteManifold& m, const ConformalFactor& phi,
                                 std::span<const double> u);

double verify_covariance_theorem(const DiscreteManifold& m, const ConformalFactor& phi,
                                 std::span<const double> u);

struct QExtraction {
  std::vector<double> q;
  double residual = 0.0;  // ||K diag(phi^{(n+a)/(n-a)} V) q - phi|| / ||phi||
};

// Solves phi = I_{g0}(Q phi^{(n+a)/(n-a)}) for Q. With regularization > 0 the
// system is solved as ridge least squares with damping
// regularization * sigma_max(system). regularization == 0 requests a plain
// solve and throws std::runtime_error if the system is singular.
QExtraction extract_Q_alpha(const DiscreteManifold& m, double alpha, const ConformalFactor& phi,
                            double regularization = 1e-10);

// Same linear system with an arbitrary right-hand side in place of phi.
QExtraction solve_Q_system(const DiscreteManifold& m, double alpha, const ConformalFactor& phi,
                           std::span<const double> rhs, double regularization);

// Forward map q -> I_{g0}(q phi^{(n+a)/(n-a)}).
std::vector<double> q_forward(const DiscreteManifold& m, double alpha, const ConformalFactor& phi,
                              std::span<const double> q);

// Random symmetric instance: volumes in [0.5, 1.5], Green entries in [0.2, 2].
DiscreteManifold random_manifold(std::size_t nodes, int n, std::uint64_t seed);

// Round-sphere sample with G_{yx} = scale * |xi_y - xi_x|^{2-n}.
DiscreteManifold sphere_sample_manifold(std::span<const double> points, int n,
                                        std::span<const double> volumes, double scale = 1.0);

// The 120 vertices of the 600-cell, a vertex-transitive sample of S^3
// (row-major, 4 columns).
std::vector<double> six_hundred_cell_vertices();

}  // namespace intcurv
