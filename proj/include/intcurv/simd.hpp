#pragma once

// Data-parallel inner loops behind kernel assembly and the dense operators.
//
// Every routine has a portable scalar reference and, on x86-64, an AVX2/FMA
// variant. The variant is picked once at startup from the CPU features; it
// can be forced with set_isa() or the INTCURV_ISA environment variable
// ("scalar" or "avx2"). The variants agree to rounding (FMA contraction and
// summation order differ), never bitwise.

#include <cstddef>
#include <span>
#include <string_view>

namespace intcurv::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// Best ISA the running CPU supports and this build was compiled for.
Isa detected_isa();
Isa active_isa();
// Throws std::invalid_argument if the requested ISA is unavailable.
void set_isa(Isa isa);

// out[j] = |target - p_j|^exponent for the points stored structure-of-arrays
// in `coords` (coords[d * count + j] is coordinate d of point j). A zero
// distance yields 0 for positive exponents.
void distance_power_row(std::span<const double> coords, std::size_t count,
                        std::span<const double> target, double exponent,
                        std::span<double> out);

// y = A x for row-major A with y.size() rows and x.size() columns.
void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);

// sum_i w_i a_i b_i
double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);

// Explicit-variant entry points, used by the equivalence tests.
namespace scalar {
void distance_power_row(const double* coords, std::size_t dim, std::size_t count,
                        const double* target, double exponent, double* out);
void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
double dot(const double* a, const double* b, std::size_t count);
double weighted_dot(const double* w, const double* a, const double* b, std::size_t count);
}  // namespace scalar

#if defined(INTCURV_HAVE_AVX2)
namespace avx2 {
void distance_power_row(const double* coords, std::size_t dim, std::size_t count,
                        const double* target, double exponent, double* out);
void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
double dot(const double* a, const double* b, std::size_t count);
double weighted_dot(const double* w, const double* a, const double* b, std::size_t count);
}  // namespace avx2
#endif

bool avx2_compiled();

}  // namespace intcurv::simd
