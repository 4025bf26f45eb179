// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Self-contained special functions used by the coupling kernel and the
// modulated-wavepacket algebra. Deliberately implemented from first
// principles (power series, an exponentially convergent integral rule, and
// asymptotic expansions) so results depend only on elementary platform math;
// accuracy targets are pinned by tests against independent references.

#pragma once

#include <vector>

namespace feberi::special {

/// Modified Bessel function K₀(x), x > 0.
/// Relative accuracy better than 1e-12 for x in [1e-6, 50].
double bessel_k0(double x);

/// Modified Bessel function K₁(x), x > 0.
/// Relative accuracy better than 1e-12 for x in [1e-6, 50].
double bessel_k1(double x);

/// Bessel function of the first kind J_m(x) for integer order m (any sign).
double bessel_j(int m, double x);

/// J_0(x) .. J_{m_max}(x) by a single downward Miller recurrence,
/// normalized with the identity J₀ + 2ΣJ_{2k} = 1. Requires m_max >= 0.
std::vector<double> bessel_j_array(int m_max, double x);

} // namespace feberi::special
