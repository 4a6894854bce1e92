#include <cmath>

#include "intcurv/simd.hpp"

namespace intcurv::simd::scalar {

namespace {

inline double power_of_squared(double d2, double exponent) {
  if (d2 == 0.0) return exponent > 0.0 ? 0.0 : HUGE_VAL;
  if (exponent == 2.0) return d2;
  if (exponent == 1.0) return std::sqrt(d2);
  if (exponent == 3.0) return d2 * std::sqrt(d2);
  if (exponent == 4.0) return d2 * d2;
  if (exponent == -1.0) return 1.0 / std::sqrt(d2);
  return std::pow(d2, 0.5 * exponent);
}

}  // namespace

void distance_power_row(const double* coords, std::size_t dim, std::size_t count,
                        const double* target, double exponent, double* out) {
  for (std::size_t j = 0; j < count; ++j) {
    double d2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = target[d] - coords[d * count + j];
      d2 += diff * diff;
    }
    out[j] = power_of_squared(d2, exponent);
  }
}

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = a + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

double dot(const double* a, const double* b, std::size_t count) {
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) acc += a[i] * b[i];
  return acc;
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t count) {
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

}  // namespace intcurv::simd::scalar
