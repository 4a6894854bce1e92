// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "intcurv/simd.hpp"

namespace intcurv::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

void distance_power_row(const double* coords, std::size_t dim, std::size_t count,
                        const double* target, double exponent, double* out) {
  const bool vector_power = exponent == 1.0 || exponent == 2.0 || exponent == 3.0 ||
                            exponent == 4.0;
  const __m256d zero = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d d2 = zero;
    for (std::size_t d = 0; d < dim; ++d) {
      const __m256d t = _mm256_set1_pd(target[d]);
      const __m256d diff = _mm256_sub_pd(t, _mm256_loadu_pd(coords + d * count + j));
      d2 = _mm256_fmadd_pd(diff, diff, d2);
    }
    if (vector_power) {
      __m256d r;
      if (exponent == 2.0) {
        r = d2;
      } else if (exponent == 4.0) {
        r = _mm256_mul_pd(d2, d2);
      } else {
        const __m256d s = _mm256_sqrt_pd(d2);
        r = exponent == 1.0 ? s : _mm256_mul_pd(d2, s);
      }
      _mm256_storeu_pd(out + j, r);
    } else {
      alignas(32) double lanes[4];
      _mm256_store_pd(lanes, d2);
      for (int k = 0; k < 4; ++k) {
        const double v = lanes[k];
        out[j + k] = v == 0.0 ? (exponent > 0.0 ? 0.0 : HUGE_VAL) : std::pow(v, 0.5 * exponent);
      }
    }
  }
  // tail
  {
    for (; j < count; ++j) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = target[d] - coords[d * count + j];
        d2 += diff * diff;
      }
      double r;
      if (d2 == 0.0) r = exponent > 0.0 ? 0.0 : HUGE_VAL;
      else if (exponent == 2.0) r = d2;
      else if (exponent == 1.0) r = std::sqrt(d2);
      else if (exponent == 3.0) r = d2 * std::sqrt(d2);
      else if (exponent == 4.0) r = d2 * d2;
      else r = std::pow(d2, 0.5 * exponent);
      out[j] = r;
    }
  }
}

double dot(const double* a, const double* b, std::size_t count) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= count; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < count; ++i) acc += a[i] * b[i];
  return acc;
}

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(a + i * cols, x, cols);
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t count) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
    acc = _mm256_fmadd_pd(wa, _mm256_loadu_pd(b + i), acc);
  }
  double total = hsum(acc);
  for (; i < count; ++i) total += w[i] * a[i] * b[i];
  return total;
}

}  // namespace intcurv::simd::avx2
