// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Small least-squares helpers used to classify excitation build-up curves:
// power laws a·x^b (log-log), polynomial fits with coefficient standard
// errors, and one-parameter scale fits for residual comparisons.

#pragma once

#include <vector>

namespace feberi::fit {

/// y = a·x^b fitted by ordinary least squares on (ln x, ln y).
/// r_squared is the coefficient of determination in log space.
struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;
    double r_squared = 0.0;
};

/// Requires x.size() == y.size() >= 3 and strictly positive data.
PowerLawFit fit_power_law(const std::vector<double>& x,
                          const std::vector<double>& y);

/// y = Σ_k coeff[k]·x^k fitted by ordinary least squares.
/// std_error[k] is the estimated standard error of coeff[k], from the
/// residual variance ssr/dof and the normal-equation covariance.
struct PolynomialFit {
    std::vector<double> coeff;
    std::vector<double> std_error;
    double ssr = 0.0;       ///< sum of squared residuals
    double r_squared = 0.0; ///< 1 - ssr / Σ(y - ȳ)²
    int dof = 0;            ///< n - (degree + 1)
};

/// Requires x.size() == y.size() > degree >= 0.
PolynomialFit fit_polynomial(const std::vector<double>& x,
                             const std::vector<double>& y, int degree);

/// y = a·basis fitted by ordinary least squares (single free parameter,
/// no intercept). Used to compare how well y ∝ N and y ∝ N² explain a
/// build-up curve via their residuals.
struct ScaleFit {
    double a = 0.0;
    double ssr = 0.0;
};

/// Requires basis.size() == y.size() >= 1 and a basis that is not all zero.
ScaleFit fit_scale(const std::vector<double>& basis,
                   const std::vector<double>& y);

} // namespace feberi::fit
