// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Quantum electron wavepacket construction in momentum space: Gaussian
// envelopes, PINEM-modulated sideband combs, dispersive drift, position-space
// density synthesis, and extraction of the density-modulation harmonics f_m.

#pragma once

#include <complex>
#include <vector>

#include "feberi/physical.hpp"

namespace feberi::wavepacket {

using physical::Kinematics;

/// Wavepacket preparation parameters. All quantities in internal units.
struct QewSpec {
    enum class Kind { gaussian, pinem_modulated };
    Kind kind = Kind::gaussian;

    double sigma_et = 0.0;           ///< temporal envelope std at waist, fs, > 0
    std::complex<double> g_L = 0.0;  ///< PINEM coupling; only |g_L| enters
    double omega_b = 0.0;            ///< modulation base frequency, rad/fs
    double phi_0 = 0.0;              ///< modulation phase, rad
    double t0 = 0.0;                 ///< envelope-centroid arrival time at the TLS, fs
    double L_d = 0.0;                ///< dispersive drift length, nm, >= 0

    /// Throws std::invalid_argument on violated invariants
    /// (sigma_et > 0; omega_b > 0 when modulated; L_d >= 0).
    void validate() const;
};

/// Momentum-space amplitudes on a uniform grid p_k = p0 + (k − n/2)·dp,
/// normalized so that Σ_k |c_k|² dp = 1. The wavefunction at time t is
///   ψ(z,t) = (dp/√(2πħ)) Σ_k c_k e^{i p_k z/ħ} e^{−i E(p_k)(t−t0)/ħ},
/// with E(p) the quadratic dispersion of physical::dispersion_energy; the
/// envelope centroid crosses z = 0 at t = t0.
struct MomentumAmplitudes {
    double p0 = 0.0;  ///< central momentum, eV·fs/nm
    double dp = 0.0;  ///< grid spacing, eV·fs/nm
    std::vector<std::complex<double>> c;
    QewSpec spec;     ///< parameters the amplitudes were built from
    Kinematics kin;
    int m_max = 0;    ///< retained sidebands (0 for a plain Gaussian)

    std::size_t size() const { return c.size(); }
    /// Momentum of sample k relative to p0.
    double delta(std::size_t k) const {
        return (static_cast<double>(k) - static_cast<double>(c.size() / 2)) * dp;
    }
};

/// Density-modulation Fourier coefficients: f_mod(t) = Σ_m f_m e^{−i m ω_b t}
/// with f_0 = 1 and f_{−m} = f_m* (real density).
struct ModulationSpectrum {
    double omega_b = 0.0;
    std::vector<std::complex<double>> f; ///< f[m] for m = 0 … m_max

    int m_max() const { return static_cast<int>(f.size()) - 1; }
    std::complex<double> harmonic(int m) const;
};

/// Momentum-space envelope std σ_p0 = ħ/(2 v₀ σ_et) (minimum-uncertainty
/// waist with σ_z0 = v₀ σ_et).
double sigma_p0(const QewSpec& spec, const Kinematics& kin);

/// PINEM sideband momentum spacing δp_L = ħ ω_b / v₀.
double sideband_spacing(const QewSpec& spec, const Kinematics& kin);

/// Quadratic-dispersion drift phase per sideband index squared,
/// φ_D = δp_L² L_d / (2 γ₀³ m ħ v₀).
double dispersion_phase(const QewSpec& spec, const Kinematics& kin);

/// Temporal envelope std after the dispersive drift:
/// σ_t(L_d) = σ_et · sqrt(1 + (σ_p0 L_d/(γ₀³ m v₀ σ_z0))²).
double drifted_sigma_t(const QewSpec& spec, const Kinematics& kin);

/// Smallest m_max such that the neglected Bessel weight Σ_{|m|>m_max}
/// J_m(2|g_L|)² is below tol. Throws unless tol ∈ (0,1).
int sideband_cutoff(std::complex<double> g_L, double tol = 1e-10);

/// Closed-form (un-normalized) momentum amplitude at offset delta = p − p0:
///   Gaussian:  exp(−δ²/(4σ_p²)) · D(δ)
///   modulated: Σ_m J_m(2|g_L|) e^{−i m (φ₀ + ω_b t0)} exp(−(δ−mδp_L)²/(4σ_p²)) · D(δ)
/// where D(δ) = exp(−i δ² L_d/(2 γ₀³ m ħ v₀)) is the drift's dispersion
/// phase. (In the drift factor e^{−iE_p L_d/ħv₀} the constant and linear
/// parts of E_p produce a global phase and a rigid translation by L_d; both
/// are absorbed by referencing the centroid arrival to t0, leaving D.)
std::complex<double> evaluate_c(const QewSpec& spec, const Kinematics& kin,
                                double delta, int m_max);

/// Samples evaluate_c on a power-of-two grid and normalizes. The span is
/// max(16 σ_p0, 2(m_max+2) δp_L) unless span_override > 0. Throws if the
/// tail mass within 4 samples of either edge exceeds 1e-9 (grid too narrow).
MomentumAmplitudes gaussian_amplitudes(const QewSpec& spec, const Kinematics& kin,
                                       std::size_t n_p = 16384,
                                       double span_override = 0.0);
MomentumAmplitudes pinem_amplitudes(const QewSpec& spec, const Kinematics& kin,
                                    int m_max, std::size_t n_p = 16384,
                                    double span_override = 0.0);

/// Uniform z grid of amps.size() points with the conjugate spacing
/// Δz = 2πħ/(N dp), centered on z_center.
std::vector<double> conjugate_z_grid(const MomentumAmplitudes& amps,
                                     double z_center);

/// |ψ(z,t)|² on z_grid (must be uniform with the conjugate spacing).
/// Integrates to 1 over the grid; throws if density mass within 4 samples of
/// either grid edge exceeds 1e-6 (aliasing).
std::vector<double> density_profile(const MomentumAmplitudes& amps,
                                    const std::vector<double>& z_grid, double t);

/// |ψ(0,t)|² at the TLS position for each t in t_grid (direct synthesis).
std::vector<double> density_time_series(const MomentumAmplitudes& amps,
                                        const std::vector<double>& t_grid);

/// Harmonics extracted from the computed density at z = 0: the density is
/// divided by the analytic drifted Gaussian envelope and one central period
/// (t0 ± π/ω_b) is projected onto e^{+i m ω_b t}; the result is normalized
/// to f_0 = 1. Throws std::domain_error("insufficient periods") when
/// sigma_et ≤ 2π/ω_b.
ModulationSpectrum modulation_spectrum(const MomentumAmplitudes& amps,
                                       int m_max = -1);

/// Independent Bessel-sum form of the harmonics at modulation phase φ₀:
///   f_m = e^{−i m φ₀} Σ_k J_k(2|g_L|) J_{k+m}(2|g_L|) e^{−i m (2k+m) φ_D}.
ModulationSpectrum bessel_spectrum(std::complex<double> g_L, double phi_D,
                                   double phi_0, double omega_b, int m_max);

} // namespace feberi::wavepacket
