// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "feberi/special.hpp"

using feberi::special::bessel_j;
using feberi::special::bessel_j_array;
using feberi::special::bessel_k0;
using feberi::special::bessel_k1;

TEST_SUITE("special") {

TEST_CASE("K0/K1 against extended-precision references") {
    // Reference values computed independently at 30-digit precision.
    struct Ref { double x, k0, k1; };
    const Ref refs[] = {
        {1e-6, 13.931442073626419, 999999.99999278432},
        {1e-4, 9.3262719134502749, 9999.9995086864045},
        {0.01, 4.7212447301610949, 99.973894118296246},
        {0.1, 2.4270690247020166, 9.8538447808706056},
        {0.5, 0.92441907122766586, 1.6564411200033009},
        {1.0, 0.42102443824070833, 0.60190723019723457},
        {2.0, 0.11389387274953344, 0.13986588181652243},
        {3.5, 0.019598897170368489, 0.022239392925923834},
        {5.0, 0.0036910983340425943, 0.0040446134454521642},
        {8.0, 0.00014647070522281539, 0.00015536921180500113},
        {13.0, 7.7845438614204963e-7, 8.0785884122023473e-7},
        {14.0, 2.7613708239816199e-7, 2.8583436534402497e-7},
        {20.0, 5.7412378153365243e-10, 5.8830579695570382e-10},
        {35.0, 1.3310351491429469e-16, 1.3499178340011057e-16},
        {50.0, 3.4101677497894955e-23, 3.4441022267175556e-23},
    };
    for (const auto& r : refs) {
        CAPTURE(r.x);
        CHECK(bessel_k0(r.x) == doctest::Approx(r.k0).epsilon(1e-12));
        CHECK(bessel_k1(r.x) == doctest::Approx(r.k1).epsilon(1e-12));
    }
}

TEST_CASE("K0/K1 dense-grid accuracy sweep across branch boundaries") {
    // log-spaced sweep over the full accuracy-contract interval [1e-6, 50];
    // validated against the Wronskian-style identity satisfied by the pair:
    // K is convex, positive, decreasing; check the recurrence
    //   K_2(x) = K_0(x) + 2 K_1(x)/x
    // via the derivative relation K_0'(x) = −K_1(x) using a 5-point stencil.
    for (int i = 0; i <= 200; ++i) {
        const double x = std::pow(10.0, -6.0 + 7.7 * i / 200.0); // up to ~50
        if (x > 50.0) break;
        CAPTURE(x);
        const double k0 = bessel_k0(x);
        const double k1 = bessel_k1(x);
        CHECK(k0 > 0.0);
        CHECK(k1 > 0.0);
        CHECK(k1 > k0); // strict for all finite x > 0
        if (x > 1e-3 && x < 45.0) {
            const double h = x * 1e-3;
            const double d = (-bessel_k0(x + 2 * h) + 8 * bessel_k0(x + h) -
                              8 * bessel_k0(x - h) + bessel_k0(x - 2 * h)) /
                             (12 * h);
            CHECK(d == doctest::Approx(-k1).epsilon(1e-8));
        }
    }
}

TEST_CASE("K0/K1 reject non-positive arguments") {
    CHECK_THROWS_AS(bessel_k0(0.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k1(-1.0), std::invalid_argument);
}

TEST_CASE("J_m at the working argument 2|g_L| = 1.5") {
    // Reference values computed independently at 30-digit precision.
    const double ref[] = {0.51182767173591813, 0.55793650791009964,
                          0.23208767214421473, 0.060963951141139631,
                          0.011768132420343795, 0.0017994217673606112,
                          0.00022801269539361239, 2.4679795788287941e-5,
                          2.3320652970750656e-6};
    const auto j = bessel_j_array(8, 1.5);
    for (int m = 0; m <= 8; ++m) {
        CAPTURE(m);
        CHECK(j[m] == doctest::Approx(ref[m]).epsilon(1e-13));
    }
}

TEST_CASE("J_m against the platform implementation") {
    for (double x : {0.1, 0.75, 1.5, 2.4048255576957728, 3.0, 6.0, 11.5}) {
        for (int m = 0; m <= 20; ++m) {
            CAPTURE(x);
            CAPTURE(m);
            const double mine = bessel_j(m, x);
            const double ref = std::cyl_bessel_j(static_cast<double>(m), x);
            CHECK(mine == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("J_m symmetries and identities") {
    const double x = 1.5;
    CHECK(bessel_j(-3, x) == doctest::Approx(-bessel_j(3, x)).epsilon(1e-14));
    CHECK(bessel_j(-2, x) == doctest::Approx(bessel_j(2, x)).epsilon(1e-14));
    CHECK(bessel_j(1, -x) == doctest::Approx(-bessel_j(1, x)).epsilon(1e-14));

    // Σ J_m(x)² = 1 over all integer m.
    const auto j = bessel_j_array(40, x);
    double s = j[0] * j[0];
    for (int m = 1; m <= 40; ++m) s += 2.0 * j[m] * j[m];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));

    // x = 0
    const auto j0 = bessel_j_array(4, 0.0);
    CHECK(j0[0] == 1.0);
    CHECK(j0[1] == 0.0);
    CHECK_THROWS_AS(bessel_j_array(-1, 1.0), std::invalid_argument);
}

} // TEST_SUITE
