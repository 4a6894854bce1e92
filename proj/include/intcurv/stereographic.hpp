#pragma once

#include <functional>
#include <span>
#include <vector>

namespace intcurv {

// S(x) = (2x / (1 + |x|^2), (1 - |x|^2) / (1 + |x|^2)); x = 0 maps to the
// north pole.
std::vector<double> inverse_projection(std::span<const double> x);

// Inverse of the above; the south pole maps to +infinity in every coordinate.
std::vector<double> stereographic_projection(std::span<const double> xi);

// phi(x) = (2 / (1 + |x|^2))^{(n - alpha)/2} with n = x.size().
double conformal_factor(std::span<const double> x, double alpha);

// | |S(x) - S(y)| - sqrt(4|x-y|^2 / ((1+|x|^2)(1+|y|^2))) |
double distance_identity_residual(std::span<const double> x, std::span<const double> y);

/// Polar product quadrature on the ball |x| <= truncation_radius in R^n
/// (n = 1 or 2). Radial panels are uniform up to core_radius and then grow
/// geometrically; every panel carries a Gauss–Legendre rule.
struct FlatGridSpec {
  int n = 2;
  double truncation_radius = 100.0;
  double core_radius = 4.0;
  double core_width = 0.25;
  double growth = 1.5;
  int panel_nodes = 16;
  int angular_count = 16;              // n = 2 only
  std::vector<double> breakpoints;     // extra radii forced onto panel edges
};

struct FlatGrid {
  int n = 0;
  double truncation_radius = 0.0;
  std::vector<double> points;   // row-major, size() x n
  std::vector<double> points_soa;
  std::vector<double> weights;  // Lebesgue measure

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * n, static_cast<std::size_t>(n)};
  }
};

FlatGrid build_flat_grid(const FlatGridSpec& spec);

// sum_j |x_t - y_j|^{alpha-n} h_j w_j for each target x_t (row-major, n per target).
std::vector<double> flat_kernel_sum(const FlatGrid& grid, double alpha, std::span<const double> h,
                                    std::span<const double> targets);

// c_{n,alpha} sum_j |x_i - y_j|^{alpha-n} h_j w_j at the grid's own nodes.
std::vector<double> apply_flat_operator(const FlatGrid& grid, double alpha, std::span<const double> h);

struct BubbleReport {
  double max_residual = 0.0;             // with the analytic tail
  double max_residual_without_tail = 0.0;
  std::vector<double> scaled_integral;   // (2/pi) T(x) per sample
  std::vector<double> exact;             // u_eps(x) per sample
};

// Checks (2/pi) \int_{R^2} |x-y|^2 u_eps^{-3}(y) dy = u_eps(x) with
// u_eps = (eps^2 + |x|^2)/eps. The integral is truncated at
// truncation_radius and the remainder added in closed form.
BubbleReport bubble_residual(double eps, std::span<const double> sample_points,
                             double truncation_radius);

// A function on R^n that extends continuously to the point at infinity.
struct FlatFunction {
  std::function<double(std::span<const double>)> value;
  double at_infinity = 0.0;
};

struct CovarianceOptions {
  int sphere_resolution = 256;
  FlatGridSpec flat;
  std::vector<double> samples;  // row-major evaluation points in R^n
};

struct CovarianceReport {
  double max_discrepancy = 0.0;
  std::vector<double> sphere_side;  // normalized sphere operator of u o S^{-1} at S(x)
  std::vector<double> flat_side;    // phi^{-1} times the flat operator of phi^{(n+a)/(n-a)} u
};

// Default evaluation grid for verify_sphere_covariance; `level` = 0 is the
// base resolution and every level halves the mesh and doubles the
// truncation radius.
CovarianceOptions default_covariance_options(int n, int level);

// Evaluates both sides of the stereographic covariance identity: the sphere
// side with a SphereGrid quadrature of u pulled back to S^n, the flat side on
// the truncated polar grid plus the leading-order tail u(inf) * 2^{(n+a)/2}
// |S^{n-1}| R^{-n} / n. Returns the largest relative discrepancy.
CovarianceReport verify_sphere_covariance(const FlatFunction& u, int n, double alpha,
                                          const CovarianceOptions& options);

}  // namespace intcurv
