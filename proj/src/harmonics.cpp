#include "intcurv/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace intcurv {

namespace {

void check(int n, int degree, int index) {
  if (n < 1 || n > 3) throw std::invalid_argument("spherical_harmonic: n must be 1, 2 or 3");
  if (degree < 0) throw std::invalid_argument("spherical_harmonic: negative degree");
  if (index < 0 || index >= harmonic_count(n, degree)) {
    throw std::invalid_argument("spherical_harmonic: index " + std::to_string(index) +
                                " out of range for degree " + std::to_string(degree));
  }
}

double gegenbauer(int order, double lambda, double x) {
  if (order == 0) return 1.0;
  double c0 = 1.0;
  double c1 = 2.0 * lambda * x;
  for (int j = 2; j <= order; ++j) {
    const double c2 = (2.0 * x * (j + lambda - 1.0) * c1 - (j + 2.0 * lambda - 2.0) * c0) / j;
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

// Orthonormal real harmonic on S^2 at the unit vector (x, y, z).
double real_ylm(int l, int m, double x, double y, double z) {
  const double theta = std::acos(std::clamp(z, -1.0, 1.0));
  const int am = std::abs(m);
  const double p = std::sph_legendre(l, am, theta);
  if (m == 0) return p;
  const double phi = std::atan2(y, x);
  return std::numbers::sqrt2 * p * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

}  // namespace

int harmonic_count(int n, int degree) {
  if (degree < 0) return 0;
  switch (n) {
    case 1: return degree == 0 ? 1 : 2;
    case 2: return 2 * degree + 1;
    case 3: return (degree + 1) * (degree + 1);
    default: throw std::invalid_argument("harmonic_count: n must be 1, 2 or 3");
  }
}

double spherical_harmonic(int n, int degree, int index, std::span<const double> xi) {
  check(n, degree, index);
  if (xi.size() != static_cast<std::size_t>(n + 1)) {
    throw std::invalid_argument("spherical_harmonic: point has wrong dimension");
  }
  if (n == 1) {
    const double theta = std::atan2(xi[1], xi[0]);
    return index == 0 ? std::cos(degree * theta) : std::sin(degree * theta);
  }
  if (n == 2) return real_ylm(degree, index - degree, xi[0], xi[1], xi[2]);

  int l = 0;
  while ((l + 1) * (l + 1) <= index) ++l;
  const int m = index - l * l - l;
  const double cos_chi = std::clamp(xi[3], -1.0, 1.0);
  const double sin_chi = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  const double radial = gegenbauer(degree - l, l + 1.0, cos_chi);
  if (l == 0) return radial;
  if (sin_chi == 0.0) return 0.0;
  const double ylm = real_ylm(l, m, xi[0] / sin_chi, xi[1] / sin_chi, xi[2] / sin_chi);
  return std::pow(sin_chi, l) * radial * ylm;
}

}  // namespace intcurv
