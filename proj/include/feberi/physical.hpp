// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Relativistic beam kinematics, the two-level-system spectral parameters, and
// the quadratic free-electron dispersion used for all drift and kinetic phases.

#pragma once

#include <string>

#include "feberi/constants.hpp"

namespace feberi::physical {

/// Electron-beam configuration, in internal units (see constants.hpp).
struct BeamConfig {
    double kinetic_energy = 0.0; ///< eV, > 0
    double r_perp0 = 0.0;        ///< impact parameter, nm, > 0
    double sigma_et = 0.0;       ///< temporal envelope size at the waist, fs, > 0
    double drift_length = 0.0;   ///< dispersive drift length, nm, >= 0

    /// Throws std::invalid_argument if any invariant is violated.
    void validate() const;
};

/// Derived relativistic kinematics of the beam.
struct Kinematics {
    double gamma0 = 1.0; ///< Lorentz factor 1 + E_kin/(m c²)
    double beta0 = 0.0;  ///< v₀/c
    double v0 = 0.0;     ///< beam velocity, nm/fs
    double p0 = 0.0;     ///< central momentum γ₀ m v₀, eV·fs/nm
    double t_r = 0.0;    ///< near-field transit time r_⊥0/(γ₀ β₀ c), fs
};

/// Two-level-system (bound electron) spectral and dipole parameters.
struct TlsSpec {
    double transition_energy = 0.0; ///< E_21, eV, > 0
    double dipole_debye = 0.0;      ///< |μ|, Debye, >= 0

    enum class Orientation { longitudinal, perpendicular };
    Orientation orientation = Orientation::perpendicular;

    /// Transition angular frequency ω_21 = E_21/ħ, rad/fs.
    double omega21() const { return transition_energy / hbar; }
    /// Transition period T_21 = 2π/ω_21, fs.
    double period21() const;
    /// Dipole magnitude in internal units, e·nm.
    double dipole_e_nm() const { return dipole_debye * debye_to_e_nm; }

    void validate() const;
};

/// Every derived quantity a downstream module consumes, in internal units,
/// plus the dimensionless ratios the figure-level scans are plotted against.
struct ScaledParams {
    Kinematics kin;
    double omega21 = 0.0;       ///< rad/fs
    double period21 = 0.0;      ///< fs
    double dipole = 0.0;        ///< e·nm
    double sigma_et = 0.0;      ///< fs
    double sigma_p0 = 0.0;      ///< ħ/(2 v₀ σ_et), eV·fs/nm
    double sigma_z0 = 0.0;      ///< v₀ σ_et = ħ/(2 σ_p0), nm
    double sigma_bar_et = 0.0;  ///< σ_et / t_r
    double sigma_over_T21 = 0.0;///< σ_et / T_21
    double gamma_big = 0.0;     ///< Γ = ω_21 σ_et (dimensionless decay parameter)
};

/// Derives γ₀, β₀, v₀, p₀ and the transit time from the beam energy and
/// impact parameter. Throws std::invalid_argument on non-positive energy.
Kinematics derive_kinematics(const BeamConfig& beam);

/// Quadratic expansion of the relativistic dispersion about p₀:
///   E(p) = ε₀ + v₀ (p − p₀) + (p − p₀)²/(2 γ₀³ m),
/// reported relative to ε₀ (the rest+kinetic offset is a global phase and is
/// gauged away everywhere downstream).
double dispersion_energy(double p, const Kinematics& kin);

/// Collects all internal-unit quantities and dimensionless ratios.
ScaledParams to_internal_units(const BeamConfig& beam, const TlsSpec& tls);

/// SI view of the primary inputs, for round-trip checking at the
/// configuration boundary.
struct SiInputs {
    double kinetic_energy_joule = 0.0;
    double r_perp0_meter = 0.0;
    double sigma_et_second = 0.0;
    double drift_length_meter = 0.0;
    double transition_energy_joule = 0.0;
    double dipole_coulomb_meter = 0.0;
};

/// Converts internal-unit inputs to SI.
SiInputs to_si(const BeamConfig& beam, const TlsSpec& tls);

/// Inverse of to_si; exact to rounding.
void from_si(const SiInputs& si, BeamConfig& beam, TlsSpec& tls);

} // namespace feberi::physical
