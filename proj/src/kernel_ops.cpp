#include "intcurv/kernel_ops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "intcurv/quadrature.hpp"
#include "intcurv/simd.hpp"

namespace intcurv {

double chordal_distance(std::span<const double> xi, std::span<const double> eta) {
  if (xi.size() != eta.size()) throw std::invalid_argument("chordal_distance: dimension mismatch");
  double d2 = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double d = xi[k] - eta[k];
    d2 += d * d;
  }
  return std::sqrt(d2);
}

double normalization_constant(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("normalization_constant: n must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("normalization_constant: alpha must be positive");
  if (alpha == static_cast<double>(n)) {
    throw std::invalid_argument("normalization_constant: alpha must differ from n");
  }
  const double inverse = std::pow(2.0, alpha - 1.0) * sphere_area(n - 1) * std::tgamma(0.5 * n) *
                         std::tgamma(0.5 * alpha) / std::tgamma(0.5 * (n + alpha));
  return 1.0 / inverse;
}

double direct_kernel_integral(int n, double alpha, int nodes) {
  if (n < 1) throw std::invalid_argument("direct_kernel_integral: n must be positive");
  const double s = alpha - n;
  if (!(s > -static_cast<double>(n))) {
    throw std::invalid_argument("direct_kernel_integral: kernel is not integrable");
  }
  const QuadratureRule rule = gauss_legendre(nodes, 0.0, 1.0);
  constexpr double pi = std::numbers::pi;
  double total = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double v = rule.nodes[k];
    const double t = pi * v * v;
    const double jacobian = 2.0 * pi * v;
    const double chord = 2.0 * std::sin(0.5 * t);
    total += rule.weights[k] * std::pow(chord, s) * std::pow(std::sin(t), n - 1) * jacobian;
  }
  // |S^0| = 2 counts the two directions on the circle.
  return sphere_area(n - 1) * total;
}

KernelOperator assemble_kernel_unchecked(const GridFunction& r, double alpha, DiagonalRule rule) {
  const GridPtr& grid = r.grid();
  if (!grid) throw std::invalid_argument("assemble_kernel: R has no grid");
  const std::size_t m = grid->size();
  const double exponent = alpha - grid->dim();
  const auto soa = grid->coordinates_soa();
  const auto w = grid->weights();
  const double inverse_c =
      rule == DiagonalRule::subtracted ? 1.0 / normalization_constant(grid->dim(), alpha) : 0.0;

  KernelOperator op;
  op.r_ = r;
  op.alpha_ = alpha;
  op.rule_ = rule;
  op.matrix_.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::span<double> row(op.matrix_.data() + i * m, m);
    simd::distance_power_row(soa, m, grid->point(i), exponent, row);
    row[i] = 0.0;
    double plain = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double kw = row[j] * w[j];
      plain += kw;
      row[j] = r[j] * kw;
    }
    if (rule == DiagonalRule::subtracted) row[i] = r[i] * (inverse_c - plain);
  }
  return op;
}

KernelOperator assemble_kernel(const GridFunction& r, double alpha, DiagonalRule rule) {
  if (!r.grid()) throw std::invalid_argument("assemble_kernel: R has no grid");
  const int n = r.grid()->dim();
  if (!(alpha > n)) {
    throw std::invalid_argument("assemble_kernel: alpha must exceed n (alpha=" +
                                std::to_string(alpha) + ", n=" + std::to_string(n) + ")");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) {
      throw std::invalid_argument("assemble_kernel: R must be positive (node " +
                                  std::to_string(i) + " has " + std::to_string(r[i]) + ")");
    }
  }
  return assemble_kernel_unchecked(r, alpha, rule);
}

GridFunction KernelOperator::apply(const GridFunction& f) const {
  require_same_grid(r_, f);
  std::vector<double> out(size());
  simd::matvec(matrix_, f.values(), out);
  return GridFunction(grid(), std::move(out));
}

GridFunction apply_operator(const KernelOperator& k, const GridFunction& f) { return k.apply(f); }

GridFunction apply_tilde_I(const GridFunction& h, double alpha, DiagonalRule rule) {
  if (!h.grid()) throw std::invalid_argument("apply_tilde_I: function has no grid");
  const int n = h.grid()->dim();
  const double c = normalization_constant(n, alpha);
  const KernelOperator k = assemble_kernel_unchecked(GridFunction::constant(h.grid(), 1.0), alpha, rule);
  GridFunction out = k.apply(h);
  for (double& v : out.values()) v *= c;
  return out;
}

}  // namespace intcurv
