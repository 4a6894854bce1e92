#include "intcurv/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace intcurv {

namespace {

// Returns P_count(x) and P_count'(x) via the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int count, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int j = 2; j <= count; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  const double derivative = count * (x * p1 - p0) / (x * x - 1.0);
  return {p1, derivative};
}

}  // namespace

QuadratureRule gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be positive");
  QuadratureRule rule;
  rule.nodes.assign(count, 0.0);
  rule.weights.assign(count, 0.0);
  if (count == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int k = 0; k < count / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (count + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(count, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(count, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.nodes[count - 1 - k] = x;
    rule.weights[k] = w;
    rule.weights[count - 1 - k] = w;
  }
  if (count % 2 == 1) {
    const double dp = legendre_with_derivative(count, 0.0).second;
    rule.weights[count / 2] = 2.0 / (dp * dp);
  }
  return rule;
}

QuadratureRule gauss_legendre(int count, double a, double b) {
  QuadratureRule rule = gauss_legendre(count);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int k = 0; k < count; ++k) {
    rule.nodes[k] = mid + half * rule.nodes[k];
    rule.weights[k] *= half;
  }
  return rule;
}

}  // namespace intcurv
