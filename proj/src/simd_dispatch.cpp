// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Runtime backend selection: AVX2 when the CPU supports it (and the build
// enabled it), otherwise the scalar reference; FEBERI_SIMD=scalar|avx2
// overrides, and tests switch backends explicitly.

#include "feberi/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace feberi::simd {

namespace detail {

bool avx2_supported_at_runtime() {
#if defined(__x86_64__) || defined(__i386__)
    return avx2_compiled_in() && __builtin_cpu_supports("avx2") &&
           __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Backend choose_default() {
    if (const char* env = std::getenv("FEBERI_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2") {
            if (!avx2_supported_at_runtime())
                throw std::invalid_argument(
                    "FEBERI_SIMD=avx2 requested but AVX2+FMA is unavailable");
            return Backend::avx2;
        }
        throw std::invalid_argument("FEBERI_SIMD: unknown backend '" + v + "'");
    }
    return avx2_supported_at_runtime() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> backend{choose_default()};
    return backend;
}

const Ops& ops() {
    return current().load(std::memory_order_relaxed) == Backend::avx2
               ? avx2_ops
               : scalar_ops;
}

} // namespace

} // namespace detail

Backend active_backend() { return detail::current().load(); }

void set_backend(Backend b) {
    if (b == Backend::avx2 && !detail::avx2_supported_at_runtime())
        throw std::invalid_argument("simd: AVX2+FMA backend unavailable on this CPU");
    detail::current().store(b);
}

std::string backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void cmul_inplace(std::complex<double>* a, const std::complex<double>* b,
                  std::size_t n) {
    detail::ops().cmul(a, b, n);
}

void cscale_inplace(std::complex<double>* a, std::complex<double> s,
                    std::size_t n) {
    detail::ops().cscale(a, s, n);
}

void rotate2_inplace(std::complex<double>* f1, std::complex<double>* f2,
                     const std::complex<double>* u11,
                     const std::complex<double>* u12,
                     const std::complex<double>* u22, std::size_t n) {
    detail::ops().rotate2(f1, f2, u11, u12, u22, n);
}

double norm_sq(const std::complex<double>* a, std::size_t n) {
    return detail::ops().norm_sq(a, n);
}

std::complex<double> inner_product(const std::complex<double>* a,
                                   const std::complex<double>* b,
                                   std::size_t n) {
    return detail::ops().inner(a, b, n);
}

} // namespace feberi::simd
