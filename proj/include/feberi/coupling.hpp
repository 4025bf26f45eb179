// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// The electron–TLS dipole interaction kernel along the beam trajectory, its
// spatial Fourier transform (closed form in modified Bessel functions), the
// weighed interaction strength (kernel ⊛ temporal envelope), and the
// dimensionless coupling constant g.

#pragma once

#include <complex>
#include <vector>

#include "feberi/physical.hpp"

namespace feberi::coupling {

using physical::Kinematics;
using physical::TlsSpec;
using Orientation = physical::TlsSpec::Orientation;

/// TLS position and dipole orientation relative to the beam axis ê_z.
/// The dipole sits at transverse offset r_perp0 from the trajectory; its
/// moment points along ê_z (longitudinal) or along ê_r (perpendicular).
struct Geometry {
    double r_perp0 = 0.0; ///< nm, > 0
    Orientation orientation = Orientation::perpendicular;

    /// Throws std::invalid_argument if r_perp0 <= 0.
    void validate() const;
};

/// Collects the geometric inputs scattered across beam and TLS configuration.
Geometry make_geometry(const physical::BeamConfig& beam, const TlsSpec& tls);

/// Signed on-axis kernel scale K = C/r_perp0² in eV, where C = k_e e μ
/// (eV·nm²). The perpendicular kernel peaks at +K at z = 0; the longitudinal
/// kernel is odd with extrema ∓2K/(3√3).
double kernel_prefactor(const Geometry& geom, const TlsSpec& tls);

/// Interaction energy M(z) (eV) of the moving electron at axial position z
/// with the dipole transition:
///   M_long(z) = −C γ z / (γ²z² + r²)^{3/2}
///   M_perp(z) = +C r   / (γ²z² + r²)^{3/2}
double dipole_kernel(double z, const Geometry& geom, const TlsSpec& tls,
                     const Kinematics& kin);

/// Spatial Fourier transform M̃(q) = ∫ dz e^{iqz} M(z) (eV·nm):
///   M̃_perp(q) = 2C (|q|/γ²) K₁(|q|r/γ)          (real, even; → 2C/(γr) at q = 0)
///   M̃_long(q) = −2iC (q/γ²) K₀(|q|r/γ)          (imaginary, odd; → 0 at q = 0)
std::complex<double> kernel_fourier(double q, const Geometry& geom,
                                    const TlsSpec& tls, const Kinematics& kin);

/// Truncation radius Z_cut = (r/γ)·sqrt(eps_rel^{−2/3} − 1) beyond which the
/// perpendicular kernel has dropped below eps_rel × its peak (the
/// longitudinal kernel is below eps_rel^{2/3} × K there). Used to bound the
/// grid region where the interaction must be applied.
double truncation_radius(const Geometry& geom, const Kinematics& kin,
                         double eps_rel = 1e-8);

/// Weighed interaction strength: the kernel expressed in transit-time units
/// t̄ = v₀ t / (r/γ), convolved with the electron's normalized temporal
/// probability density (Gaussian of standard deviation sigma_bar_et in t̄):
///   f(Δ) = ∫ dt̄′ M(z(t̄′)) · exp(−(Δ−t̄′)²/(2σ̄²)) / (σ̄√(2π)).
/// Returns f evaluated at each entry of tbar_grid (interpreted as t̄ − t̄₀).
std::vector<double> weighed_strength(const std::vector<double>& tbar_grid,
                                     double sigma_bar_et, const Geometry& geom,
                                     const TlsSpec& tls, const Kinematics& kin);

/// Single-point version of weighed_strength.
double weighed_strength_at(double tbar, double sigma_bar_et,
                           const Geometry& geom, const TlsSpec& tls,
                           const Kinematics& kin);

/// Dimensionless coupling constant g = |M̃(ω_21/v₀)| / (ħ v₀): the
/// single-electron transition amplitude magnitude at resonance for a
/// point-like (Γ → 0) wavepacket.
double coupling_constant_g(const Geometry& geom, const TlsSpec& tls,
                           const Kinematics& kin);

} // namespace feberi::coupling
