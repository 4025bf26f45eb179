// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Scalar reference kernels: the semantic definition the SIMD variants are
// equivalence-tested against.

#include "feberi/simd.hpp"

namespace feberi::simd::detail {

namespace {

void s_cmul(std::complex<double>* a, const std::complex<double>* b,
            std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= b[i];
}

void s_cscale(std::complex<double>* a, std::complex<double> s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

void s_rotate2(std::complex<double>* f1, std::complex<double>* f2,
               const std::complex<double>* u11, const std::complex<double>* u12,
               const std::complex<double>* u22, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> a = f1[i];
        const std::complex<double> b = f2[i];
        f1[i] = u11[i] * a + u12[i] * b;
        f2[i] = u12[i] * a + u22[i] * b;
    }
}

double s_norm_sq(const std::complex<double>* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return acc;
}

std::complex<double> s_inner(const std::complex<double>* a,
                             const std::complex<double>* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

} // namespace

const Ops scalar_ops = {s_cmul, s_cscale, s_rotate2, s_norm_sq, s_inner};

} // namespace feberi::simd::detail
