// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "feberi/fit.hpp"
#include "feberi/rng.hpp"

using namespace feberi;
using namespace feberi::fit;

namespace {

std::vector<double> iota_n(int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1.0;
    return v;
}

} // namespace

TEST_SUITE("fit") {

TEST_CASE("power law recovers exact exponents") {
    const auto x = iota_n(20);
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);

    const auto f = fit_power_law(x, y);
    CHECK(f.b == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.a == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> y3;
    for (double v : x) y3.push_back(0.25 * std::pow(v, -1.5));
    const auto g = fit_power_law(x, y3);
    CHECK(g.b == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(g.a == doctest::Approx(0.25).epsilon(1e-11));
}

TEST_CASE("power law tolerates multiplicative noise") {
    const auto x = iota_n(20);
    rng::CounterRng rng(17, 0);
    std::vector<double> y;
    for (double v : x) y.push_back(4.0e-7 * v * v * rng.uniform(0.95, 1.05));

    const auto f = fit_power_law(x, y);
    CHECK(f.b == doctest::Approx(2.0).epsilon(0.025));
    CHECK(f.r_squared > 0.995);
}

TEST_CASE("polynomial fit is exact on polynomial data") {
    const auto x = iota_n(12);
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 + 0.5 * v - 0.125 * v * v);

    const auto f = fit_polynomial(x, y, 2);
    REQUIRE(f.coeff.size() == 3);
    CHECK(f.coeff[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f.coeff[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(f.coeff[2] == doctest::Approx(-0.125).epsilon(1e-9));
    CHECK(f.ssr < 1e-16);
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.dof == 9);
    for (double se : f.std_error) CHECK(se < 1e-8);
}

TEST_CASE("quadratic coefficient of noisy linear data is consistent with zero") {
    const auto x = iota_n(40);
    rng::CounterRng rng(3, 0);
    std::vector<double> y;
    for (double v : x) y.push_back(5.0 * v + rng.uniform(-1.0, 1.0));

    const auto f = fit_polynomial(x, y, 2);
    CHECK(std::abs(f.coeff[2]) <= 2.0 * f.std_error[2]);
    CHECK(f.coeff[1] == doctest::Approx(5.0).epsilon(0.02));

    // Quadratic data, by contrast, yields a strongly significant coefficient.
    std::vector<double> yq;
    rng::CounterRng rng2(4, 0);
    for (double v : x) yq.push_back(0.2 * v * v + rng2.uniform(-1.0, 1.0));
    const auto fq = fit_polynomial(x, yq, 2);
    CHECK(std::abs(fq.coeff[2]) > 10.0 * fq.std_error[2]);
}

TEST_CASE("scale-fit residuals separate linear from quadratic growth") {
    const auto n = iota_n(20);
    std::vector<double> lin_basis = n, quad_basis;
    for (double v : n) quad_basis.push_back(v * v);

    rng::CounterRng rng(9, 0);
    std::vector<double> y_quadratic, y_linear;
    for (double v : n) {
        y_quadratic.push_back(2.0 * v * v * rng.uniform(0.98, 1.02));
        y_linear.push_back(3.0 * v * rng.uniform(0.98, 1.02));
    }

    const auto qq = fit_scale(quad_basis, y_quadratic);
    const auto ql = fit_scale(lin_basis, y_quadratic);
    CHECK(qq.a == doctest::Approx(2.0).epsilon(0.02));
    CHECK(qq.ssr < ql.ssr);

    const auto ll = fit_scale(lin_basis, y_linear);
    const auto lq = fit_scale(quad_basis, y_linear);
    CHECK(ll.a == doctest::Approx(3.0).epsilon(0.02));
    CHECK(ll.ssr < lq.ssr);
}

TEST_CASE("validation and degenerate designs") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    const std::vector<double> y{1.0, 2.0};
    CHECK_THROWS_AS(fit_power_law(x, y), std::invalid_argument);
    CHECK_THROWS_AS(fit_polynomial(x, y, 1), std::invalid_argument);
    CHECK_THROWS_AS(fit_scale(x, y), std::invalid_argument);

    CHECK_THROWS_AS(fit_power_law({1.0, 2.0, -3.0}, {1.0, 1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({1.0, 2.0, 3.0}, {1.0, 0.0, 1.0}),
                    std::invalid_argument);

    // Not enough points for the parameter count.
    CHECK_THROWS_AS(fit_polynomial({1.0, 2.0}, {1.0, 2.0}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_polynomial(x, {1.0, 2.0, 3.0}, -1),
                    std::invalid_argument);

    // Constant abscissae make the design singular.
    CHECK_THROWS_AS(fit_polynomial({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_scale({0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}),
                    std::invalid_argument);

    // Degree 0 reduces to the mean.
    const auto mean = fit_polynomial(x, {2.0, 4.0, 6.0}, 0);
    CHECK(mean.coeff[0] == doctest::Approx(4.0));
}

} // TEST_SUITE("fit")
