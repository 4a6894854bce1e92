#include "intcurv/stereographic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "intcurv/kernel_ops.hpp"
#include "intcurv/quadrature.hpp"
#include "intcurv/simd.hpp"
#include "intcurv/sphere_grid.hpp"

namespace intcurv {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

std::vector<double> radial_breakpoints(const FlatGridSpec& spec) {
  std::vector<double> edges{0.0};
  double r = 0.0;
  while (r < spec.core_radius && r < spec.truncation_radius) {
    r = std::min(r + spec.core_width, std::min(spec.core_radius, spec.truncation_radius));
    edges.push_back(r);
  }
  double width = spec.core_width;
  while (r < spec.truncation_radius) {
    width *= spec.growth;
    r = std::min(r + width, spec.truncation_radius);
    edges.push_back(r);
  }
  for (double b : spec.breakpoints) {
    if (b > 0.0 && b < spec.truncation_radius) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12 * (1.0 + b); }),
              edges.end());
  return edges;
}

}  // namespace

std::vector<double> inverse_projection(std::span<const double> x) {
  const double r2 = norm2(x);
  const double denom = 1.0 + r2;
  std::vector<double> xi(x.size() + 1);
  for (std::size_t j = 0; j < x.size(); ++j) xi[j] = 2.0 * x[j] / denom;
  xi[x.size()] = (1.0 - r2) / denom;
  return xi;
}

std::vector<double> stereographic_projection(std::span<const double> xi) {
  const std::size_t n = xi.size() - 1;
  const double denom = 1.0 + xi[n];
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = denom == 0.0 ? std::numeric_limits<double>::infinity() : xi[j] / denom;
  }
  return x;
}

double conformal_factor(std::span<const double> x, double alpha) {
  const double n = static_cast<double>(x.size());
  return std::pow(2.0 / (1.0 + norm2(x)), 0.5 * (n - alpha));
}

double distance_identity_residual(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("distance_identity_residual: dimension mismatch");
  const auto sx = inverse_projection(x);
  const auto sy = inverse_projection(y);
  double dxy2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) dxy2 += (x[j] - y[j]) * (x[j] - y[j]);
  const double rhs = std::sqrt(4.0 * dxy2 / ((1.0 + norm2(x)) * (1.0 + norm2(y))));
  return std::abs(chordal_distance(sx, sy) - rhs);
}

FlatGrid build_flat_grid(const FlatGridSpec& spec) {
  if (spec.n != 1 && spec.n != 2) throw std::invalid_argument("build_flat_grid: n must be 1 or 2");
  if (!(spec.truncation_radius > 0.0) || !(spec.core_width > 0.0) || !(spec.growth >= 1.0) ||
      spec.panel_nodes < 1) {
    throw std::invalid_argument("build_flat_grid: invalid panel specification");
  }
  const std::vector<double> edges = radial_breakpoints(spec);
  std::vector<double> radii, radial_weights;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const QuadratureRule rule = gauss_legendre(spec.panel_nodes, edges[p], edges[p + 1]);
    radii.insert(radii.end(), rule.nodes.begin(), rule.nodes.end());
    radial_weights.insert(radial_weights.end(), rule.weights.begin(), rule.weights.end());
  }

  FlatGrid grid;
  grid.n = spec.n;
  grid.truncation_radius = spec.truncation_radius;
  if (spec.n == 1) {
    for (int sign : {-1, 1}) {
      for (std::size_t k = 0; k < radii.size(); ++k) {
        grid.points.push_back(sign * radii[k]);
        grid.weights.push_back(radial_weights[k]);
      }
    }
  } else {
    const int a = spec.angular_count;
    if (a < 3) throw std::invalid_argument("build_flat_grid: need at least 3 angles");
    for (std::size_t k = 0; k < radii.size(); ++k) {
      for (int j = 0; j < a; ++j) {
        const double phi = 2.0 * kPi * (j + 0.5) / a;
        grid.points.push_back(radii[k] * std::cos(phi));
        grid.points.push_back(radii[k] * std::sin(phi));
        grid.weights.push_back(radii[k] * radial_weights[k] * 2.0 * kPi / a);
      }
    }
  }
  const std::size_t count = grid.weights.size();
  grid.points_soa.resize(count * grid.n);
  for (std::size_t i = 0; i < count; ++i) {
    for (int d = 0; d < grid.n; ++d) grid.points_soa[d * count + i] = grid.points[i * grid.n + d];
  }
  return grid;
}

std::vector<double> flat_kernel_sum(const FlatGrid& grid, double alpha, std::span<const double> h,
                                    std::span<const double> targets) {
  if (h.size() != grid.size()) throw std::invalid_argument("flat_kernel_sum: density size mismatch");
  const std::size_t n = static_cast<std::size_t>(grid.n);
  if (targets.size() % n != 0) throw std::invalid_argument("flat_kernel_sum: bad target array");
  const std::size_t count = targets.size() / n;
  std::vector<double> hw(grid.size());
  for (std::size_t j = 0; j < hw.size(); ++j) hw[j] = h[j] * grid.weights[j];
  std::vector<double> row(grid.size());
  std::vector<double> out(count);
  for (std::size_t t = 0; t < count; ++t) {
    simd::distance_power_row(grid.points_soa, grid.size(), targets.subspan(t * n, n), alpha - grid.n,
                             row);
    out[t] = simd::dot(row, hw);
  }
  return out;
}

std::vector<double> apply_flat_operator(const FlatGrid& grid, double alpha, std::span<const double> h) {
  std::vector<double> out = flat_kernel_sum(grid, alpha, h, grid.points);
  const double c = normalization_constant(grid.n, alpha);
  for (double& v : out) v *= c;
  return out;
}

BubbleReport bubble_residual(double eps, std::span<const double> sample_points,
                             double truncation_radius) {
  if (!(eps > 0.0)) throw std::invalid_argument("bubble_residual: eps must be positive");
  if (sample_points.size() % 2 != 0) throw std::invalid_argument("bubble_residual: samples are 2-D");
  FlatGridSpec spec;
  spec.n = 2;
  spec.truncation_radius = truncation_radius;
  spec.core_radius = 2.0 * eps;
  spec.core_width = 0.25 * eps;
  spec.growth = 1.6;
  spec.panel_nodes = 16;
  spec.angular_count = 8;  // the kernel is a degree-2 trigonometric polynomial in angle
  const FlatGrid grid = build_flat_grid(spec);

  std::vector<double> density(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double u = (eps * eps + norm2(grid.point(j))) / eps;
    density[j] = 1.0 / (u * u * u);
  }
  const std::vector<double> truncated = flat_kernel_sum(grid, 4.0, density, sample_points);

  // Exact integral over |y| > R of |x-y|^2 eps^3 / (eps^2 + |y|^2)^3.
  const double s0 = eps * eps + truncation_radius * truncation_radius;
  const double e3 = eps * eps * eps;
  BubbleReport report;
  const std::size_t count = sample_points.size() / 2;
  for (std::size_t t = 0; t < count; ++t) {
    const double x2 = norm2(sample_points.subspan(2 * t, 2));
    const double tail = kPi * e3 * (x2 / (2.0 * s0 * s0) + 1.0 / s0 - eps * eps / (2.0 * s0 * s0));
    const double exact = (eps * eps + x2) / eps;
    const double with_tail = (2.0 / kPi) * (truncated[t] + tail);
    const double without_tail = (2.0 / kPi) * truncated[t];
    report.scaled_integral.push_back(with_tail);
    report.exact.push_back(exact);
    report.max_residual = std::max(report.max_residual, std::abs(with_tail - exact) / exact);
    report.max_residual_without_tail =
        std::max(report.max_residual_without_tail, std::abs(without_tail - exact) / exact);
  }
  return report;
}

CovarianceOptions default_covariance_options(int n, int level) {
  CovarianceOptions opts;
  const double refine = std::pow(2.0, level);
  opts.flat.n = n;
  opts.flat.truncation_radius = (n == 1 ? 200.0 : 50.0) * refine;
  opts.flat.core_radius = 4.0;
  opts.flat.core_width = 0.5 / refine;
  opts.flat.growth = 1.5;
  opts.flat.panel_nodes = 12;
  opts.flat.angular_count = static_cast<int>(16 * refine);
  opts.sphere_resolution = static_cast<int>((n == 1 ? 256 : 32) * refine);
  if (n == 1) {
    opts.samples = {-2.5, -1.0, -0.4, 0.0, 0.3, 0.8, 1.7, 3.0};
    for (double x : opts.samples) opts.flat.breakpoints.push_back(std::abs(x));
  } else {
    opts.samples = {0.0, 0.0, 0.5, 0.0, -0.3, 0.8, 1.2, -0.7, -2.0, -1.0, 0.0, 3.0};
  }
  return opts;
}

CovarianceReport verify_sphere_covariance(const FlatFunction& u, int n, double alpha,
                                          const CovarianceOptions& options) {
  if (n != options.flat.n) throw std::invalid_argument("verify_sphere_covariance: dimension mismatch");
  if (!(alpha > n)) throw std::invalid_argument("verify_sphere_covariance: requires alpha > n");
  const double c = normalization_constant(n, alpha);
  const double s = alpha - n;

  // Sphere side: u pulled back through the projection.
  const GridPtr sphere = build_grid(n, options.sphere_resolution);
  std::vector<double> pulled(sphere->size());
  for (std::size_t j = 0; j < sphere->size(); ++j) {
    const auto p = sphere->point(j);
    pulled[j] = p[n] <= -1.0 ? u.at_infinity : u.value(stereographic_projection(p));
  }

  // Flat side density phi^{(n+a)/(n-a)} u = (2/(1+|y|^2))^{(n+a)/2} u.
  const FlatGrid flat = build_flat_grid(options.flat);
  std::vector<double> density(flat.size());
  for (std::size_t j = 0; j < flat.size(); ++j) {
    const auto y = flat.point(j);
    density[j] = std::pow(2.0 / (1.0 + norm2(y)), 0.5 * (n + alpha)) * u.value(y);
  }
  const std::vector<double> flat_sums = flat_kernel_sum(flat, alpha, density, options.samples);
  const double radius = options.flat.truncation_radius;
  const double tail = u.at_infinity * std::pow(2.0, 0.5 * (n + alpha)) * sphere_area(n - 1) *
                      std::pow(radius, -n) / n;

  CovarianceReport report;
  std::vector<double> row(sphere->size());
  const auto w = sphere->weights();
  const std::size_t count = options.samples.size() / n;
  for (std::size_t t = 0; t < count; ++t) {
    const std::span<const double> x(options.samples.data() + t * n, static_cast<std::size_t>(n));
    const std::vector<double> target = inverse_projection(x);
    const double ux = u.value(x);
    simd::distance_power_row(sphere->coordinates_soa(), sphere->size(), target, s, row);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * (pulled[j] - ux) * w[j];
    const double lhs = c * (acc + ux / c);
    const double rhs = c * (flat_sums[t] + tail) / conformal_factor(x, alpha);
    report.sphere_side.push_back(lhs);
    report.flat_side.push_back(rhs);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale > 0.0) {
      report.max_discrepancy = std::max(report.max_discrepancy, std::abs(lhs - rhs) / scale);
    }
  }
  return report;
}

}  // namespace intcurv
