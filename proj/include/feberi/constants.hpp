// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Physical constants, pinned to fixed decimal values so that every build and
// every test run reproduces bit-identical numbers.
//
// Internal unit system (used by every module interface):
//   length  : nanometer  (nm)
//   time    : femtosecond (fs)
//   energy  : electron-volt (eV)
//   charge  : elementary charge (e)
// Derived: momentum eV·fs/nm, mass eV·fs²/nm², angular frequency rad/fs.
// This keeps all simulation scalars within a few orders of magnitude of unity.

#pragma once

namespace feberi {

/// Reduced Planck constant, eV·fs.
inline constexpr double hbar = 0.6582119569;

/// Speed of light, nm/fs.
inline constexpr double c_light = 299.792458;

/// Electron rest energy m·c², eV.
inline constexpr double electron_rest_energy = 510998.95;

/// Electron mass in internal units, eV·fs²/nm² (= rest energy / c²).
inline constexpr double electron_mass = electron_rest_energy / (c_light * c_light);

/// One Debye expressed as e·nm.
inline constexpr double debye_to_e_nm = 0.0208194;

/// Coulomb coupling e²/(4π ε₀), eV·nm.
inline constexpr double coulomb_e2 = 1.4399645;

/// Elementary charge in coulomb (exact SI definition); used only for
/// SI round-trip conversions at the configuration boundary.
inline constexpr double elementary_charge_si = 1.602176634e-19;

} // namespace feberi
