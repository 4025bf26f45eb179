// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// AVX2+FMA kernels. Complex doubles are processed two per 256-bit vector in
// interleaved (re, im) layout. This translation unit is the only one
// compiled with -mavx2 -mfma; callers reach it through the runtime dispatch
// table, so no AVX2 instruction executes unless the CPU supports it.

#include "feberi/simd.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace feberi::simd::detail {

namespace {

// (a.re·b.re − a.im·b.im, a.re·b.im + a.im·b.re) for two complex lanes.
inline __m256d cmul2(__m256d va, __m256d vb) {
    const __m256d b_flip = _mm256_permute_pd(vb, 0b0101); // (b.im, b.re)
    const __m256d a_re = _mm256_movedup_pd(va);           // (a.re, a.re)
    const __m256d a_im = _mm256_permute_pd(va, 0b1111);   // (a.im, a.im)
    return _mm256_fmaddsub_pd(a_re, vb, _mm256_mul_pd(a_im, b_flip));
}

void v_cmul(std::complex<double>* a, const std::complex<double>* b,
            std::size_t n) {
    double* ap = reinterpret_cast<double*>(a);
    const double* bp = reinterpret_cast<const double*>(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(ap + 2 * i);
        const __m256d vb = _mm256_loadu_pd(bp + 2 * i);
        _mm256_storeu_pd(ap + 2 * i, cmul2(va, vb));
    }
    for (; i < n; ++i) a[i] *= b[i];
}

void v_cscale(std::complex<double>* a, std::complex<double> s, std::size_t n) {
    double* ap = reinterpret_cast<double*>(a);
    const __m256d vs = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(ap + 2 * i);
        _mm256_storeu_pd(ap + 2 * i, cmul2(va, vs));
    }
    for (; i < n; ++i) a[i] *= s;
}

void v_rotate2(std::complex<double>* f1, std::complex<double>* f2,
               const std::complex<double>* u11, const std::complex<double>* u12,
               const std::complex<double>* u22, std::size_t n) {
    double* p1 = reinterpret_cast<double*>(f1);
    double* p2 = reinterpret_cast<double*>(f2);
    const double* q11 = reinterpret_cast<const double*>(u11);
    const double* q12 = reinterpret_cast<const double*>(u12);
    const double* q22 = reinterpret_cast<const double*>(u22);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d a = _mm256_loadu_pd(p1 + 2 * i);
        const __m256d b = _mm256_loadu_pd(p2 + 2 * i);
        const __m256d m11 = _mm256_loadu_pd(q11 + 2 * i);
        const __m256d m12 = _mm256_loadu_pd(q12 + 2 * i);
        const __m256d m22 = _mm256_loadu_pd(q22 + 2 * i);
        const __m256d r1 = _mm256_add_pd(cmul2(m11, a), cmul2(m12, b));
        const __m256d r2 = _mm256_add_pd(cmul2(m12, a), cmul2(m22, b));
        _mm256_storeu_pd(p1 + 2 * i, r1);
        _mm256_storeu_pd(p2 + 2 * i, r2);
    }
    for (; i < n; ++i) {
        const std::complex<double> a = f1[i];
        const std::complex<double> b = f2[i];
        f1[i] = u11[i] * a + u12[i] * b;
        f2[i] = u12[i] * a + u22[i] * b;
    }
}

inline double hsum4(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double v_norm_sq(const std::complex<double>* a, std::size_t n) {
    const double* ap = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(ap + 2 * i);
        acc = _mm256_fmadd_pd(va, va, acc);
    }
    double out = hsum4(acc);
    for (; i < n; ++i)
        out += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return out;
}

std::complex<double> v_inner(const std::complex<double>* a,
                             const std::complex<double>* b, std::size_t n) {
    const double* ap = reinterpret_cast<const double*>(a);
    const double* bp = reinterpret_cast<const double*>(b);
    // Real part: Σ (a.re·b.re + a.im·b.im)  — plain lane sum of a·b.
    // Imag part: Σ (a.re·b.im − a.im·b.re)  — lane sum of a·flip(b) with the
    // odd (a.im·b.re) lanes negated.
    const __m256d signflip = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(ap + 2 * i);
        const __m256d vb = _mm256_loadu_pd(bp + 2 * i);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);
        const __m256d bf = _mm256_permute_pd(vb, 0b0101);
        const __m256d prod = _mm256_xor_pd(_mm256_mul_pd(va, bf), signflip);
        acc_im = _mm256_add_pd(acc_im, prod);
    }
    double re = hsum4(acc_re);
    double im = hsum4(acc_im);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

} // namespace

const Ops avx2_ops = {v_cmul, v_cscale, v_rotate2, v_norm_sq, v_inner};

bool avx2_compiled_in() { return true; }

} // namespace feberi::simd::detail

#else // !(__AVX2__ && __FMA__)

namespace feberi::simd::detail {

const Ops avx2_ops = {nullptr, nullptr, nullptr, nullptr, nullptr};

bool avx2_compiled_in() { return false; }

} // namespace feberi::simd::detail

#endif
