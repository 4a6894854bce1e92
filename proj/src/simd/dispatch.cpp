#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "intcurv/simd.hpp"

namespace intcurv::simd {

namespace {

Isa probe() {
#if defined(INTCURV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa initial_isa() {
  const Isa best = probe();
  if (const char* env = std::getenv("INTCURV_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && best == Isa::avx2) return Isa::avx2;
  }
  return best;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
  static const Isa best = probe();
  return best;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
    throw std::invalid_argument("AVX2 kernels are not available on this machine/build");
  }
  current().store(isa, std::memory_order_relaxed);
}

bool avx2_compiled() {
#if defined(INTCURV_HAVE_AVX2)
  return true;
#else
  return false;
#endif
}

void distance_power_row(std::span<const double> coords, std::size_t count,
                        std::span<const double> target, double exponent,
                        std::span<double> out) {
  const std::size_t dim = target.size();
  require_same_size(coords.size(), dim * count, "distance_power_row");
  require_same_size(out.size(), count, "distance_power_row");
#if defined(INTCURV_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    avx2::distance_power_row(coords.data(), dim, count, target.data(), exponent, out.data());
    return;
  }
#endif
  scalar::distance_power_row(coords.data(), dim, count, target.data(), exponent, out.data());
}

void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  require_same_size(a.size(), x.size() * y.size(), "matvec");
#if defined(INTCURV_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    avx2::matvec(a.data(), y.size(), x.size(), x.data(), y.data());
    return;
  }
#endif
  scalar::matvec(a.data(), y.size(), x.size(), x.data(), y.data());
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
#if defined(INTCURV_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::dot(a.data(), b.data(), a.size());
#endif
  return scalar::dot(a.data(), b.data(), a.size());
}

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
  require_same_size(w.size(), a.size(), "weighted_dot");
  require_same_size(w.size(), b.size(), "weighted_dot");
#if defined(INTCURV_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::weighted_dot(w.data(), a.data(), b.data(), w.size());
#endif
  return scalar::weighted_dot(w.data(), a.data(), b.data(), w.size());
}

}  // namespace intcurv::simd
