// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include <doctest.h>

#include <complex>
#include <stdexcept>
#include <vector>

#include "feberi/rng.hpp"
#include "feberi/simd.hpp"

namespace simd = feberi::simd;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_field(std::size_t n, std::uint64_t stream) {
    feberi::rng::CounterRng rng(20260825, stream);
    std::vector<cplx> v(n);
    for (auto& z : v) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return v;
}

struct BackendGuard {
    simd::Backend saved = simd::active_backend();
    ~BackendGuard() { simd::set_backend(saved); }
};

} // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar reference kernels match direct formulas") {
    BackendGuard guard;
    simd::set_backend(simd::Backend::scalar);

    const std::size_t n = 257; // deliberately not a multiple of the lane width
    auto a = random_field(n, 1);
    auto b = random_field(n, 2);
    auto a0 = a;

    simd::cmul_inplace(a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == a0[i] * b[i]);

    const cplx s{0.8, -0.6};
    auto c = a0;
    simd::cscale_inplace(c.data(), s, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(c[i] == a0[i] * s);

    double ns = 0.0;
    cplx ip{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        ns += std::norm(a0[i]);
        ip += std::conj(a0[i]) * b[i];
    }
    CHECK(simd::norm_sq(a0.data(), n) == doctest::Approx(ns).epsilon(1e-14));
    const cplx got = simd::inner_product(a0.data(), b.data(), n);
    CHECK(got.real() == doctest::Approx(ip.real()).epsilon(1e-13));
    CHECK(got.imag() == doctest::Approx(ip.imag()).epsilon(1e-13));
}

TEST_CASE("rotate2 applies the symmetric 2x2 matrix pointwise") {
    BackendGuard guard;
    simd::set_backend(simd::Backend::scalar);

    const std::size_t n = 130;
    auto f1 = random_field(n, 3);
    auto f2 = random_field(n, 4);
    auto u11 = random_field(n, 5);
    auto u12 = random_field(n, 6);
    auto u22 = random_field(n, 7);
    auto g1 = f1, g2 = f2;

    simd::rotate2_inplace(f1.data(), f2.data(), u11.data(), u12.data(),
                          u22.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx e1 = u11[i] * g1[i] + u12[i] * g2[i];
        const cplx e2 = u12[i] * g1[i] + u22[i] * g2[i];
        CHECK(std::abs(f1[i] - e1) < 1e-15);
        CHECK(std::abs(f2[i] - e2) < 1e-15);
    }
}

TEST_CASE("AVX2 backend agrees with scalar reference" *
          doctest::skip(!simd::detail::avx2_compiled_in() ||
                        !simd::detail::avx2_supported_at_runtime())) {
    const auto& sc = simd::detail::scalar_ops;
    const auto& vx = simd::detail::avx2_ops;

    // Several lengths around vector-width boundaries, including tiny ones.
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3},
                          std::size_t{4}, std::size_t{5}, std::size_t{7},
                          std::size_t{8}, std::size_t{63}, std::size_t{64},
                          std::size_t{1000}, std::size_t{4097}}) {
        CAPTURE(n);
        auto a = random_field(n, 10 + n);
        auto b = random_field(n, 20 + n);

        auto a1 = a, a2 = a;
        sc.cmul(a1.data(), b.data(), n);
        vx.cmul(a2.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(a1[i] - a2[i]) < 1e-15);

        const cplx s{0.36, 0.48};
        auto c1 = a, c2 = a;
        sc.cscale(c1.data(), s, n);
        vx.cscale(c2.data(), s, n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(c1[i] - c2[i]) < 1e-15);

        auto u11 = random_field(n, 30 + n);
        auto u12 = random_field(n, 40 + n);
        auto u22 = random_field(n, 50 + n);
        auto f1a = a, f2a = b, f1b = a, f2b = b;
        sc.rotate2(f1a.data(), f2a.data(), u11.data(), u12.data(), u22.data(), n);
        vx.rotate2(f1b.data(), f2b.data(), u11.data(), u12.data(), u22.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(f1a[i] - f1b[i]) < 1e-15);
            CHECK(std::abs(f2a[i] - f2b[i]) < 1e-15);
        }

        // Reductions: summation order differs, so compare to relative 1e-13.
        const double n1 = sc.norm_sq(a.data(), n);
        const double n2 = vx.norm_sq(a.data(), n);
        CHECK(n2 == doctest::Approx(n1).epsilon(1e-13));
        const cplx i1 = sc.inner(a.data(), b.data(), n);
        const cplx i2 = vx.inner(a.data(), b.data(), n);
        CHECK(std::abs(i1 - i2) <= 1e-13 * (1.0 + std::abs(i1)));
    }
}

TEST_CASE("backend selection is explicit and validated") {
    BackendGuard guard;
    simd::set_backend(simd::Backend::scalar);
    CHECK(simd::active_backend() == simd::Backend::scalar);
    CHECK(simd::backend_name(simd::Backend::scalar) == "scalar");
    CHECK(simd::backend_name(simd::Backend::avx2) == "avx2");

    if (simd::detail::avx2_compiled_in() &&
        simd::detail::avx2_supported_at_runtime()) {
        simd::set_backend(simd::Backend::avx2);
        CHECK(simd::active_backend() == simd::Backend::avx2);
    } else {
        CHECK_THROWS_AS(simd::set_backend(simd::Backend::avx2),
                        std::invalid_argument);
    }
}

} // TEST_SUITE
