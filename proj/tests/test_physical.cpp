// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "feberi/physical.hpp"
#include "feberi/quantity.hpp"

using namespace feberi;
using namespace feberi::physical;

namespace {

BeamConfig reference_beam() {
    BeamConfig b;
    b.kinetic_energy = 200e3; // 200 keV
    b.r_perp0 = 2.0;
    b.sigma_et = 2.0678338483020016; // one transition period of a 2 eV gap
    b.drift_length = 0.0;
    return b;
}

TlsSpec reference_tls() {
    TlsSpec t;
    t.transition_energy = 2.0;
    t.dipole_debye = 5.0;
    return t;
}

} // namespace

TEST_SUITE("physical") {

TEST_CASE("kinematics of a 200 keV beam") {
    const Kinematics k = derive_kinematics(reference_beam());
    // Reference values computed independently at extended precision from the
    // pinned constants.
    CHECK(k.gamma0 == doctest::Approx(1.3913902367118367).epsilon(1e-14));
    CHECK(k.beta0 == doctest::Approx(0.69531447126274466).epsilon(1e-14));
    CHECK(k.v0 == doctest::Approx(208.45003442282859).epsilon(1e-14));
    CHECK(k.p0 == doctest::Approx(1649.0336757825196).epsilon(1e-14));
    CHECK(k.t_r == doctest::Approx(0.0068957113333787886).epsilon(1e-14));
    // γ ≈ 1.4 for a 200 keV beam.
    CHECK(k.gamma0 == doctest::Approx(1.4).epsilon(0.01));
}

TEST_CASE("kinematic identities") {
    const Kinematics k = derive_kinematics(reference_beam());
    CHECK(k.gamma0 * k.gamma0 * (1.0 - k.beta0 * k.beta0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k.p0 == doctest::Approx(k.gamma0 * electron_mass * k.v0).epsilon(1e-14));

    // Nonrelativistic limit: gamma -> 1, beta -> 0.
    BeamConfig slow = reference_beam();
    slow.kinetic_energy = 1e-6;
    const Kinematics ks = derive_kinematics(slow);
    CHECK(ks.gamma0 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ks.beta0 < 1e-4);
}

TEST_CASE("invalid beam parameters are rejected") {
    BeamConfig b = reference_beam();
    b.kinetic_energy = 0.0;
    CHECK_THROWS_AS(derive_kinematics(b), std::invalid_argument);
    b = reference_beam();
    b.r_perp0 = -1.0;
    CHECK_THROWS_AS(derive_kinematics(b), std::invalid_argument);
}

TEST_CASE("dispersion is exactly quadratic around p0") {
    const Kinematics k = derive_kinematics(reference_beam());
    CHECK(dispersion_energy(k.p0, k) == 0.0);

    const double d = 0.37;
    // group velocity at p0; the central difference is exact for a quadratic,
    // so a large step only has to beat floating-point rounding of p0 ± h
    const double h = 0.5;
    const double dEdp =
        (dispersion_energy(k.p0 + h, k) - dispersion_energy(k.p0 - h, k)) / (2 * h);
    CHECK(dEdp == doctest::Approx(k.v0).epsilon(1e-11));
    // symmetric quadratic part
    const double curv = dispersion_energy(k.p0 + d, k) + dispersion_energy(k.p0 - d, k);
    CHECK(curv == doctest::Approx(d * d / (std::pow(k.gamma0, 3) * electron_mass))
                      .epsilon(1e-12));
    // third finite difference vanishes identically for a quadratic
    const double f3 = dispersion_energy(k.p0 + 3 * d, k) -
                      3 * dispersion_energy(k.p0 + 2 * d, k) +
                      3 * dispersion_energy(k.p0 + d, k) - dispersion_energy(k.p0, k);
    const double scale = std::abs(dispersion_energy(k.p0 + 3 * d, k)) + 1.0;
    CHECK(std::abs(f3) / scale < 1e-10);
}

TEST_CASE("derived scales of the reference configuration") {
    const ScaledParams s = to_internal_units(reference_beam(), reference_tls());
    CHECK(s.omega21 == doctest::Approx(3.0385348959922548).epsilon(1e-14));
    // omega21 = 3.04e15 rad/s in SI
    CHECK(s.omega21 * 1e15 == doctest::Approx(3.04e15).epsilon(0.001));
    CHECK(s.period21 == doctest::Approx(2.0678338483020016).epsilon(1e-14));
    CHECK(s.kin.t_r * 1e-15 == doctest::Approx(6.9e-18).epsilon(0.01));
    CHECK(s.dipole == doctest::Approx(5.0 * 0.0208194).epsilon(1e-14));
    CHECK(s.sigma_over_T21 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.sigma_bar_et == doctest::Approx(s.sigma_et / s.kin.t_r).epsilon(1e-14));
    // minimum-uncertainty pair
    CHECK(s.sigma_p0 * s.sigma_z0 == doctest::Approx(hbar / 2).epsilon(1e-14));
    CHECK(s.sigma_z0 == doctest::Approx(s.kin.v0 * s.sigma_et).epsilon(1e-14));
    CHECK(s.gamma_big == doctest::Approx(2 * 3.14159265358979324).epsilon(1e-12));
}

TEST_CASE("SI round-trip") {
    const BeamConfig b0 = reference_beam();
    const TlsSpec t0 = reference_tls();
    const SiInputs si = to_si(b0, t0);
    BeamConfig b1;
    TlsSpec t1;
    from_si(si, b1, t1);
    CHECK(b1.kinetic_energy == doctest::Approx(b0.kinetic_energy).epsilon(1e-12));
    CHECK(b1.r_perp0 == doctest::Approx(b0.r_perp0).epsilon(1e-12));
    CHECK(b1.sigma_et == doctest::Approx(b0.sigma_et).epsilon(1e-12));
    CHECK(t1.transition_energy ==
          doctest::Approx(t0.transition_energy).epsilon(1e-12));
    CHECK(t1.dipole_debye == doctest::Approx(t0.dipole_debye).epsilon(1e-12));
}

TEST_CASE("quantity parsing") {
    CHECK(parse_quantity("200 keV", Dimension::energy) == doctest::Approx(200e3));
    CHECK(parse_quantity("2eV", Dimension::energy) == doctest::Approx(2.0));
    CHECK(parse_quantity("2 nm", Dimension::length) == doctest::Approx(2.0));
    CHECK(parse_quantity("3 cm", Dimension::length) == doctest::Approx(3e7));
    CHECK(parse_quantity("1.5 fs", Dimension::time) == doctest::Approx(1.5));
    CHECK(parse_quantity("5 D", Dimension::dipole) == doctest::Approx(5.0));
    CHECK(parse_quantity("3.04 rad/fs", Dimension::frequency) ==
          doctest::Approx(3.04));
    CHECK(parse_quantity("0.75", Dimension::dimensionless) == doctest::Approx(0.75));
    CHECK(parse_quantity("90 deg", Dimension::angle) ==
          doctest::Approx(1.5707963267948966));

    CHECK_THROWS_AS(parse_quantity("200", Dimension::energy), std::invalid_argument);
    CHECK_THROWS_AS(parse_quantity("200 bogus", Dimension::energy),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_quantity("2 nm", Dimension::energy), std::invalid_argument);
    CHECK_THROWS_AS(parse_quantity("0.75 nm", Dimension::dimensionless),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_quantity("junk", Dimension::length), std::invalid_argument);
}

} // TEST_SUITE
