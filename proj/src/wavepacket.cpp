// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include "feberi/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "feberi/constants.hpp"
#include "feberi/fft.hpp"
#include "feberi/special.hpp"

namespace feberi::wavepacket {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Quadratic drift-phase coefficient: D(δ) = exp(−i quad_coeff(spec,kin) δ²).
double quad_coeff(const QewSpec& spec, const Kinematics& kin) {
    return spec.L_d /
           (2.0 * std::pow(kin.gamma0, 3) * electron_mass * hbar * kin.v0);
}

/// J_{−m}(x) = (−1)^m J_m(x) lookup into a m ≥ 0 table.
double j_signed(const std::vector<double>& j, int m) {
    const int a = std::abs(m);
    const double v = j[static_cast<std::size_t>(a)];
    return (m < 0 && (a & 1)) ? -v : v;
}

} // namespace

void QewSpec::validate() const {
    if (!(sigma_et > 0.0))
        throw std::invalid_argument("QewSpec: sigma_et must be > 0 fs");
    if (kind == Kind::pinem_modulated && !(omega_b > 0.0))
        throw std::invalid_argument("QewSpec: omega_b must be > 0 for a modulated packet");
    if (L_d < 0.0)
        throw std::invalid_argument("QewSpec: L_d must be >= 0 nm");
}

std::complex<double> ModulationSpectrum::harmonic(int m) const {
    const int a = std::abs(m);
    if (a >= static_cast<int>(f.size()))
        throw std::out_of_range("ModulationSpectrum::harmonic: |m| > m_max");
    return m >= 0 ? f[static_cast<std::size_t>(a)]
                  : std::conj(f[static_cast<std::size_t>(a)]);
}

double sigma_p0(const QewSpec& spec, const Kinematics& kin) {
    return hbar / (2.0 * kin.v0 * spec.sigma_et);
}

double sideband_spacing(const QewSpec& spec, const Kinematics& kin) {
    return hbar * spec.omega_b / kin.v0;
}

double dispersion_phase(const QewSpec& spec, const Kinematics& kin) {
    const double dpl = sideband_spacing(spec, kin);
    return dpl * dpl * quad_coeff(spec, kin);
}

double drifted_sigma_t(const QewSpec& spec, const Kinematics& kin) {
    const double sz0 = kin.v0 * spec.sigma_et;
    const double sp = sigma_p0(spec, kin);
    const double spread = sp * spec.L_d /
                          (std::pow(kin.gamma0, 3) * electron_mass * kin.v0);
    return std::sqrt(sz0 * sz0 + spread * spread) / kin.v0;
}

int sideband_cutoff(std::complex<double> g_L, double tol) {
    if (!(tol > 0.0) || !(tol < 1.0))
        throw std::invalid_argument("sideband_cutoff: tol must be in (0,1)");
    const double x = 2.0 * std::abs(g_L);
    constexpr int cap = 512;
    const auto j = special::bessel_j_array(cap, x);
    double kept = j[0] * j[0];
    if (1.0 - kept < tol) return 0;
    for (int m = 1; m <= cap; ++m) {
        kept += 2.0 * j[static_cast<std::size_t>(m)] * j[static_cast<std::size_t>(m)];
        if (1.0 - kept < tol) return m;
    }
    throw std::runtime_error("sideband_cutoff: did not converge below tol");
}

std::complex<double> evaluate_c(const QewSpec& spec, const Kinematics& kin,
                                double delta, int m_max) {
    const double sp = sigma_p0(spec, kin);
    const double qc = quad_coeff(spec, kin);
    const std::complex<double> drift =
        std::polar(1.0, -qc * delta * delta);
    if (spec.kind == QewSpec::Kind::gaussian)
        return std::exp(-delta * delta / (4.0 * sp * sp)) * drift;

    const double x = 2.0 * std::abs(spec.g_L);
    const auto j = special::bessel_j_array(std::abs(m_max), x);
    const double dpl = sideband_spacing(spec, kin);
    const double comb_phase = spec.phi_0 + spec.omega_b * spec.t0;
    std::complex<double> sum = 0.0;
    for (int m = -m_max; m <= m_max; ++m) {
        const double d = delta - m * dpl;
        sum += j_signed(j, m) * std::polar(1.0, -m * comb_phase) *
               std::exp(-d * d / (4.0 * sp * sp));
    }
    return sum * drift;
}

namespace {

MomentumAmplitudes build_amplitudes(const QewSpec& spec, const Kinematics& kin,
                                    int m_max, std::size_t n_p,
                                    double span_override) {
    spec.validate();
    if (n_p < 8 || (n_p & (n_p - 1)) != 0)
        throw std::invalid_argument("momentum grid size must be a power of two >= 8");

    double span = 16.0 * sigma_p0(spec, kin);
    if (spec.kind == QewSpec::Kind::pinem_modulated)
        span = std::max(span, 2.0 * (m_max + 2) * sideband_spacing(spec, kin));
    if (span_override > 0.0) span = span_override;

    MomentumAmplitudes amps;
    amps.p0 = kin.p0;
    amps.dp = span / static_cast<double>(n_p);
    amps.spec = spec;
    amps.kin = kin;
    amps.m_max = m_max;
    amps.c.resize(n_p);

    double norm = 0.0;
    for (std::size_t k = 0; k < n_p; ++k) {
        amps.c[k] = evaluate_c(spec, kin, amps.delta(k), m_max);
        norm += std::norm(amps.c[k]);
    }
    norm *= amps.dp;
    if (!(norm > 0.0))
        throw std::invalid_argument("momentum amplitudes have zero norm");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : amps.c) v *= scale;

    double edge = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
        edge += std::norm(amps.c[k]) + std::norm(amps.c[n_p - 1 - k]);
    if (edge * amps.dp > 1e-9)
        throw std::invalid_argument(
            "momentum grid too narrow: edge mass exceeds 1e-9 of the norm");
    return amps;
}

} // namespace

MomentumAmplitudes gaussian_amplitudes(const QewSpec& spec, const Kinematics& kin,
                                       std::size_t n_p, double span_override) {
    if (spec.kind != QewSpec::Kind::gaussian)
        throw std::invalid_argument("gaussian_amplitudes: spec.kind must be gaussian");
    return build_amplitudes(spec, kin, 0, n_p, span_override);
}

MomentumAmplitudes pinem_amplitudes(const QewSpec& spec, const Kinematics& kin,
                                    int m_max, std::size_t n_p,
                                    double span_override) {
    if (spec.kind != QewSpec::Kind::pinem_modulated)
        throw std::invalid_argument("pinem_amplitudes: spec.kind must be pinem_modulated");
    const int needed = sideband_cutoff(spec.g_L, 1e-10);
    if (m_max < needed)
        throw std::invalid_argument("pinem_amplitudes: m_max below sideband_cutoff");
    return build_amplitudes(spec, kin, m_max, n_p, span_override);
}

std::vector<double> conjugate_z_grid(const MomentumAmplitudes& amps,
                                     double z_center) {
    const std::size_t n = amps.size();
    const double dz = two_pi * hbar / (static_cast<double>(n) * amps.dp);
    std::vector<double> z(n);
    for (std::size_t j = 0; j < n; ++j)
        z[j] = z_center +
               (static_cast<double>(j) - static_cast<double>(n / 2)) * dz;
    return z;
}

std::vector<double> density_profile(const MomentumAmplitudes& amps,
                                    const std::vector<double>& z_grid, double t) {
    const std::size_t n = amps.size();
    if (z_grid.size() != n)
        throw std::invalid_argument("density_profile: z_grid size mismatch");
    const double dz_expect = two_pi * hbar / (static_cast<double>(n) * amps.dp);
    const double dz = z_grid[1] - z_grid[0];
    if (std::abs(dz - dz_expect) > 1e-9 * dz_expect)
        throw std::invalid_argument(
            "density_profile: z_grid is not conjugate to the momentum grid");
    for (std::size_t j = 2; j < n; ++j)
        if (std::abs((z_grid[j] - z_grid[j - 1]) - dz) > 1e-6 * dz)
            throw std::invalid_argument("density_profile: z_grid is not uniform");

    fft::cvector x(n);
    const double z0 = z_grid[0];
    const double dt = t - amps.spec.t0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = amps.delta(k);
        const double e = physical::dispersion_energy(amps.p0 + d, amps.kin);
        x[k] = amps.c[k] * std::polar(1.0, (d * z0 - e * dt) / hbar);
    }
    fft::transform(x.data(), n, 1, +1);

    const double scale = amps.dp * amps.dp / (two_pi * hbar);
    std::vector<double> rho(n);
    for (std::size_t j = 0; j < n; ++j) rho[j] = std::norm(x[j]) * scale;

    double edge = 0.0;
    for (std::size_t j = 0; j < 4; ++j) edge += rho[j] + rho[n - 1 - j];
    if (edge * dz > 1e-6)
        throw std::invalid_argument(
            "density_profile: aliasing detected (edge density mass > 1e-6)");
    return rho;
}

std::vector<double> density_time_series(const MomentumAmplitudes& amps,
                                        const std::vector<double>& t_grid) {
    const std::size_t n = amps.size();
    const std::size_t nt = t_grid.size();
    std::vector<double> rho(nt);
    const double scale = amps.dp * amps.dp / (two_pi * hbar);

    std::vector<double> energy(n);
    for (std::size_t k = 0; k < n; ++k)
        energy[k] = physical::dispersion_energy(amps.p0 + amps.delta(k), amps.kin);

    bool uniform = nt >= 3;
    const double dt0 = nt >= 2 ? t_grid[1] - t_grid[0] : 0.0;
    for (std::size_t i = 2; i < nt && uniform; ++i)
        uniform = std::abs((t_grid[i] - t_grid[i - 1]) - dt0) <=
                  1e-12 * std::max(1.0, std::abs(dt0));

    if (uniform) {
        // March the per-mode phase with one complex multiply per sample.
        std::vector<std::complex<double>> cur(n), step(n);
        for (std::size_t k = 0; k < n; ++k) {
            cur[k] = amps.c[k] *
                     std::polar(1.0, -energy[k] * (t_grid[0] - amps.spec.t0) / hbar);
            step[k] = std::polar(1.0, -energy[k] * dt0 / hbar);
        }
        for (std::size_t i = 0; i < nt; ++i) {
            std::complex<double> acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                acc += cur[k];
                cur[k] *= step[k];
            }
            rho[i] = std::norm(acc) * scale;
        }
    } else {
        for (std::size_t i = 0; i < nt; ++i) {
            std::complex<double> acc = 0.0;
            const double dt = t_grid[i] - amps.spec.t0;
            for (std::size_t k = 0; k < n; ++k)
                acc += amps.c[k] * std::polar(1.0, -energy[k] * dt / hbar);
            rho[i] = std::norm(acc) * scale;
        }
    }
    return rho;
}

ModulationSpectrum modulation_spectrum(const MomentumAmplitudes& amps,
                                       int m_max) {
    const QewSpec& spec = amps.spec;
    if (spec.kind != QewSpec::Kind::pinem_modulated)
        throw std::invalid_argument("modulation_spectrum: amplitudes are unmodulated");
    const double period = two_pi / spec.omega_b;
    if (!(spec.sigma_et > period))
        throw std::domain_error(
            "insufficient periods: sigma_et <= 2*pi/omega_b, the envelope is "
            "too narrow to define modulation harmonics");
    if (m_max < 0) m_max = amps.m_max;

    constexpr std::size_t samples = 4096;
    std::vector<double> t(samples);
    for (std::size_t i = 0; i < samples; ++i)
        t[i] = spec.t0 + period * ((static_cast<double>(i) + 0.5) / samples - 0.5);
    const auto rho = density_time_series(amps, t);

    // Analytic drifted Gaussian envelope evaluated at z = 0.
    const double sigma_t = drifted_sigma_t(spec, amps.kin);
    const double sigma_z = sigma_t * amps.kin.v0;
    const double env_scale = 1.0 / (std::sqrt(two_pi) * sigma_z);

    std::vector<double> ratio(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = (t[i] - spec.t0) / sigma_t;
        ratio[i] = rho[i] / (env_scale * std::exp(-0.5 * u * u));
    }

    ModulationSpectrum out;
    out.omega_b = spec.omega_b;
    out.f.resize(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < samples; ++i)
            acc += ratio[i] * std::polar(1.0, m * spec.omega_b * t[i]);
        out.f[static_cast<std::size_t>(m)] = acc / static_cast<double>(samples);
    }
    const std::complex<double> f0 = out.f[0];
    if (std::abs(f0) == 0.0)
        throw std::runtime_error("modulation_spectrum: vanishing mean density");
    for (auto& v : out.f) v /= f0;
    out.f[0] = 1.0;
    return out;
}

ModulationSpectrum bessel_spectrum(std::complex<double> g_L, double phi_D,
                                   double phi_0, double omega_b, int m_max) {
    if (m_max < 0)
        throw std::invalid_argument("bessel_spectrum: m_max must be >= 0");
    const double x = 2.0 * std::abs(g_L);
    const int kcap = sideband_cutoff(g_L, 1e-15) + m_max + 2;
    const auto j = special::bessel_j_array(kcap + m_max, x);

    ModulationSpectrum out;
    out.omega_b = omega_b;
    out.f.resize(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) {
        std::complex<double> acc = 0.0;
        for (int k = -kcap; k <= kcap; ++k)
            acc += j_signed(j, k) * j_signed(j, k + m) *
                   std::polar(1.0, -static_cast<double>(m) * (2.0 * k + m) * phi_D);
        out.f[static_cast<std::size_t>(m)] =
            acc * std::polar(1.0, -static_cast<double>(m) * phi_0);
    }
    const double f0 = out.f[0].real(); // Σ J_k² = 1 up to truncation
    for (auto& v : out.f) v /= f0;
    out.f[0] = 1.0;
    return out;
}

} // namespace feberi::wavepacket
