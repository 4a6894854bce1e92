#pragma once

#include <span>

namespace intcurv {

// Number of real spherical harmonics of the given degree on S^n, n in {1,2,3}.
int harmonic_count(int n, int degree);

// Real spherical harmonic of `degree` on S^n evaluated at the unit vector xi
// (xi.size() == n + 1). `index` runs over [0, harmonic_count(n, degree)).
//   n = 1: cos(k theta), sin(k theta).
//   n = 2: orthonormal real Y_l^m, index = m + l.
//   n = 3: sin^l(chi) C_{k-l}^{(l+1)}(cos chi) Y_l^m(omega) with cos chi = xi_4
//          and omega the direction of (xi_1, xi_2, xi_3); index = l^2 + m + l.
// Harmonics of degree k satisfy Y(-xi) = (-1)^k Y(xi).
double spherical_harmonic(int n, int degree, int index, std::span<const double> xi);

}  // namespace intcurv
