// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include "feberi/fit.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace feberi::fit {

namespace {

void check_sizes(const std::vector<double>& x, const std::vector<double>& y,
                 std::size_t minimum, const char* who) {
    if (x.size() != y.size())
        throw std::invalid_argument(std::string(who) +
                                    ": x and y must have the same length");
    if (x.size() < minimum)
        throw std::invalid_argument(std::string(who) + ": too few points");
}

/// In-place Gauss-Jordan inversion of a small symmetric positive-definite
/// matrix (p <= ~7 here). Throws on a singular design.
std::vector<double> invert(std::vector<double> m, std::size_t p) {
    std::vector<double> inv(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) inv[i * p + i] = 1.0;
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < p; ++r)
            if (std::abs(m[r * p + col]) > std::abs(m[pivot * p + col]))
                pivot = r;
        if (m[pivot * p + col] == 0.0)
            throw std::invalid_argument("least squares: singular design matrix "
                                        "(degenerate abscissae)");
        if (pivot != col)
            for (std::size_t c = 0; c < p; ++c) {
                std::swap(m[pivot * p + c], m[col * p + c]);
                std::swap(inv[pivot * p + c], inv[col * p + c]);
            }
        const double d = m[col * p + col];
        for (std::size_t c = 0; c < p; ++c) {
            m[col * p + c] /= d;
            inv[col * p + c] /= d;
        }
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            const double f = m[r * p + col];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < p; ++c) {
                m[r * p + c] -= f * m[col * p + c];
                inv[r * p + c] -= f * inv[col * p + c];
            }
        }
    }
    return inv;
}

double r_squared_of(const std::vector<double>& y, double ssr) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double sst = 0.0;
    for (double v : y) sst += (v - mean) * (v - mean);
    if (sst == 0.0) return ssr == 0.0 ? 1.0 : 0.0;
    return 1.0 - ssr / sst;
}

} // namespace

PowerLawFit fit_power_law(const std::vector<double>& x,
                          const std::vector<double>& y) {
    check_sizes(x, y, 3, "fit_power_law");
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument(
                "fit_power_law: requires strictly positive x and y");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const auto line = fit_polynomial(lx, ly, 1);
    PowerLawFit out;
    out.a = std::exp(line.coeff[0]);
    out.b = line.coeff[1];
    out.r_squared = line.r_squared;
    return out;
}

PolynomialFit fit_polynomial(const std::vector<double>& x,
                             const std::vector<double>& y, int degree) {
    if (degree < 0)
        throw std::invalid_argument("fit_polynomial: degree must be >= 0");
    const std::size_t p = static_cast<std::size_t>(degree) + 1;
    check_sizes(x, y, p, "fit_polynomial");
    const std::size_t n = x.size();

    // Normal equations (XᵀX)c = Xᵀy with X_{ik} = x_i^k.
    std::vector<double> xtx(p * p, 0.0), xty(p, 0.0), powers(p);
    for (std::size_t i = 0; i < n; ++i) {
        powers[0] = 1.0;
        for (std::size_t k = 1; k < p; ++k) powers[k] = powers[k - 1] * x[i];
        for (std::size_t r = 0; r < p; ++r) {
            xty[r] += powers[r] * y[i];
            for (std::size_t c = 0; c < p; ++c)
                xtx[r * p + c] += powers[r] * powers[c];
        }
    }
    const auto cov = invert(xtx, p); // (XᵀX)⁻¹

    PolynomialFit out;
    out.coeff.assign(p, 0.0);
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < p; ++c)
            out.coeff[r] += cov[r * p + c] * xty[c];

    for (std::size_t i = 0; i < n; ++i) {
        double model = 0.0, xp = 1.0;
        for (std::size_t k = 0; k < p; ++k) {
            model += out.coeff[k] * xp;
            xp *= x[i];
        }
        const double res = y[i] - model;
        out.ssr += res * res;
    }
    out.dof = static_cast<int>(n - p);
    out.r_squared = r_squared_of(y, out.ssr);

    const double variance = out.dof > 0 ? out.ssr / out.dof : 0.0;
    out.std_error.assign(p, 0.0);
    for (std::size_t k = 0; k < p; ++k)
        out.std_error[k] = std::sqrt(std::max(0.0, cov[k * p + k] * variance));
    return out;
}

ScaleFit fit_scale(const std::vector<double>& basis,
                   const std::vector<double>& y) {
    check_sizes(basis, y, 1, "fit_scale");
    double bb = 0.0, by = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bb += basis[i] * basis[i];
        by += basis[i] * y[i];
    }
    if (bb == 0.0)
        throw std::invalid_argument("fit_scale: basis is identically zero");
    ScaleFit out;
    out.a = by / bb;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const double res = y[i] - out.a * basis[i];
        out.ssr += res * res;
    }
    return out;
}

} // namespace feberi::fit
