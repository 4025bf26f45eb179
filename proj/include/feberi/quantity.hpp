// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Parsing of unit-suffixed quantity strings ("200 keV", "2 nm", "3 cm") into
// internal units. Configuration files carry explicit unit suffixes so that a
// mis-scaled input fails loudly instead of silently corrupting a run.

#pragma once

#include <string>

namespace feberi::physical {

enum class Dimension {
    energy,        ///< internal: eV
    length,        ///< internal: nm
    time,          ///< internal: fs
    dipole,        ///< internal: Debye (converted downstream)
    frequency,     ///< internal: rad/fs
    angle,         ///< internal: rad
    dimensionless, ///< no unit token allowed
};

/// Parses "<number> <unit>" (unit may abut the number) and converts to the
/// internal unit of the requested dimension. Dimensionless quantities must
/// carry no unit. Throws std::invalid_argument with a descriptive message on
/// malformed input, unknown units, or a unit of the wrong dimension.
double parse_quantity(const std::string& text, Dimension dim);

/// Human-readable name of the internal unit of a dimension (for messages).
std::string internal_unit_name(Dimension dim);

} // namespace feberi::physical
