// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include "feberi/physical.hpp"

#include <cmath>
#include <stdexcept>

namespace feberi::physical {

namespace {
constexpr double two_pi = 6.283185307179586476925286766559;
} // namespace

void BeamConfig::validate() const {
    if (!(kinetic_energy > 0.0))
        throw std::invalid_argument("beam: kinetic_energy must be > 0");
    if (!(r_perp0 > 0.0))
        throw std::invalid_argument("beam: r_perp0 must be > 0");
    if (!(sigma_et > 0.0))
        throw std::invalid_argument("beam: sigma_et must be > 0");
    if (drift_length < 0.0)
        throw std::invalid_argument("beam: drift_length must be >= 0");
}

double TlsSpec::period21() const { return two_pi / omega21(); }

void TlsSpec::validate() const {
    if (!(transition_energy > 0.0))
        throw std::invalid_argument("tls: transition_energy must be > 0");
    if (dipole_debye < 0.0)
        throw std::invalid_argument("tls: dipole magnitude must be >= 0");
}

Kinematics derive_kinematics(const BeamConfig& beam) {
    beam.validate();
    Kinematics k;
    k.gamma0 = 1.0 + beam.kinetic_energy / electron_rest_energy;
    k.beta0 = std::sqrt(1.0 - 1.0 / (k.gamma0 * k.gamma0));
    k.v0 = k.beta0 * c_light;
    k.p0 = k.gamma0 * electron_mass * k.v0;
    k.t_r = beam.r_perp0 / (k.gamma0 * k.v0);
    return k;
}

double dispersion_energy(double p, const Kinematics& kin) {
    const double dp = p - kin.p0;
    return kin.v0 * dp +
           dp * dp / (2.0 * kin.gamma0 * kin.gamma0 * kin.gamma0 * electron_mass);
}

ScaledParams to_internal_units(const BeamConfig& beam, const TlsSpec& tls) {
    beam.validate();
    tls.validate();
    ScaledParams s;
    s.kin = derive_kinematics(beam);
    s.omega21 = tls.omega21();
    s.period21 = tls.period21();
    s.dipole = tls.dipole_e_nm();
    s.sigma_et = beam.sigma_et;
    // Minimum-uncertainty Gaussian at its longitudinal waist:
    //   σ_z0 = v₀ σ_et  and  σ_z0 σ_p0 = ħ/2.
    s.sigma_z0 = s.kin.v0 * beam.sigma_et;
    s.sigma_p0 = hbar / (2.0 * s.sigma_z0);
    s.sigma_bar_et = beam.sigma_et / s.kin.t_r;
    s.sigma_over_T21 = beam.sigma_et / s.period21;
    s.gamma_big = s.omega21 * beam.sigma_et;
    return s;
}

SiInputs to_si(const BeamConfig& beam, const TlsSpec& tls) {
    SiInputs si;
    si.kinetic_energy_joule = beam.kinetic_energy * elementary_charge_si;
    si.r_perp0_meter = beam.r_perp0 * 1e-9;
    si.sigma_et_second = beam.sigma_et * 1e-15;
    si.drift_length_meter = beam.drift_length * 1e-9;
    si.transition_energy_joule = tls.transition_energy * elementary_charge_si;
    // dipole: e·nm → C·m
    si.dipole_coulomb_meter = tls.dipole_e_nm() * elementary_charge_si * 1e-9;
    return si;
}

void from_si(const SiInputs& si, BeamConfig& beam, TlsSpec& tls) {
    beam.kinetic_energy = si.kinetic_energy_joule / elementary_charge_si;
    beam.r_perp0 = si.r_perp0_meter * 1e9;
    beam.sigma_et = si.sigma_et_second * 1e15;
    beam.drift_length = si.drift_length_meter * 1e9;
    tls.transition_energy = si.transition_energy_joule / elementary_charge_si;
    tls.dipole_debye =
        si.dipole_coulomb_meter / (elementary_charge_si * 1e-9) / debye_to_e_nm;
}

} // namespace feberi::physical
