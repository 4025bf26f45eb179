// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include "feberi/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "feberi/constants.hpp"
#include "feberi/rng.hpp"

namespace feberi::analytic {

namespace {

constexpr std::complex<double> one_over_i{0.0, -1.0};

void warn(WarningSink sink, std::string msg) {
    if (sink) sink->push_back(std::move(msg));
}

/// (1/iħv₀)·M̃(ω/v₀): the amplitude prefactor of direction ω = ω_ij.
std::complex<double> amp_factor(double omega, const Context& ctx) {
    const auto M = coupling::kernel_fourier(omega / ctx.kin.v0, ctx.geom,
                                            ctx.tls, ctx.kin);
    return one_over_i / (hbar * ctx.kin.v0) * M;
}

/// Gaussian spectral weight F_et(ω) = e^{−ω²σ²/2}.
double envelope_weight(double omega, double sigma_et) {
    return std::exp(-0.5 * omega * omega * sigma_et * sigma_et);
}

void check_small_signal(int n, double g_eff, WarningSink warnings) {
    const double strength = n * g_eff;
    if (strength > 0.3)
        warn(warnings,
             "small-signal condition violated: N*g*exp(-Gamma^2/2) = " +
                 std::to_string(strength) + " > 0.3; accumulated first-order "
                 "amplitudes are no longer a faithful expansion");
}

} // namespace

void TlsAmplitudes::validate() const {
    const double n = std::norm(C1) + std::norm(C2);
    if (std::abs(n - 1.0) > 1e-9)
        throw std::invalid_argument(
            "TlsAmplitudes: |C1|^2 + |C2|^2 must equal 1 within 1e-9");
}

TlsAmplitudes make_state(std::complex<double> c1, std::complex<double> c2) {
    const double n = std::sqrt(std::norm(c1) + std::norm(c2));
    if (!(n > 0.0))
        throw std::invalid_argument("make_state: zero state vector");
    return TlsAmplitudes{c1 / n, c2 / n};
}

Increment single_increment(const TlsAmplitudes& tls, double t0,
                           const QewSpec& qew, const Context& ctx) {
    if (qew.kind != QewSpec::Kind::gaussian)
        throw std::invalid_argument(
            "single_increment: expects an unmodulated Gaussian packet (use "
            "modulated_increment for PINEM packets)");
    qew.validate();
    const double w21 = ctx.tls.omega21();
    Increment inc;
    inc.dC2 = amp_factor(+w21, ctx) * tls.C1 * std::polar(1.0, +w21 * t0) *
              envelope_weight(w21, qew.sigma_et);
    inc.dC1 = amp_factor(-w21, ctx) * tls.C2 * std::polar(1.0, -w21 * t0) *
              envelope_weight(w21, qew.sigma_et);
    return inc;
}

TransitionReport post_probability(const TlsAmplitudes& tls, const Increment& inc) {
    TransitionReport r;
    r.p_prev = std::norm(tls.C2);
    r.dp1 = 2.0 * std::real(std::conj(tls.C2) * inc.dC2);
    r.dp2 = std::norm(inc.dC2);
    r.p_post = r.p_prev + r.dp1 + r.dp2;
    return r;
}

TlsAmplitudes apply_increment(const TlsAmplitudes& tls, const Increment& inc,
                              bool renormalize) {
    TlsAmplitudes out{tls.C1 + inc.dC1, tls.C2 + inc.dC2};
    if (renormalize) {
        const double n = std::sqrt(std::norm(out.C1) + std::norm(out.C2));
        out.C1 /= n;
        out.C2 /= n;
    }
    return out;
}

namespace {

/// Common core of the modulated amplitude: one direction ω = ω_ij, source
/// amplitude src, summing harmonics restricted by keep (m in [m_lo, m_hi]).
std::complex<double> modulated_direction(double omega, std::complex<double> src,
                                         const ModulationSpectrum& spectrum,
                                         double t0, double t_L, double sigma_et,
                                         const Context& ctx, int m_lo, int m_hi) {
    if (src == std::complex<double>{0.0, 0.0}) return {0.0, 0.0};
    std::complex<double> comb = 0.0;
    for (int m = m_lo; m <= m_hi; ++m)
        comb += spectrum.harmonic(m) *
                std::polar(1.0, -m * spectrum.omega_b * t_L) *
                envelope_weight(omega - m * spectrum.omega_b, sigma_et);
    return amp_factor(omega, ctx) * src * std::polar(1.0, omega * t0) * comb;
}

} // namespace

Increment modulated_amplitudes(const TlsAmplitudes& tls,
                               const ModulationSpectrum& spectrum, double t0,
                               double t_L, double sigma_et, const Context& ctx,
                               WarningSink warnings) {
    if (!(sigma_et > 0.0))
        throw std::invalid_argument("modulated_amplitudes: sigma_et must be > 0");
    if (spectrum.m_max() > 0 &&
        !(sigma_et > 2.0 * std::numbers::pi / spectrum.omega_b))
        warn(warnings,
             "envelope validity: sigma_et <= 2*pi/omega_b; the factorized "
             "envelope-times-comb density model is marginal here (result "
             "computed anyway)");
    const double w21 = ctx.tls.omega21();
    const int M = spectrum.m_max();
    Increment inc;
    inc.dC2 = modulated_direction(+w21, tls.C1, spectrum, t0, t_L, sigma_et,
                                  ctx, -M, M);
    inc.dC1 = modulated_direction(-w21, tls.C2, spectrum, t0, t_L, sigma_et,
                                  ctx, -M, M);
    return inc;
}

Increment modulated_amplitudes_retained(const TlsAmplitudes& tls,
                                        const ModulationSpectrum& spectrum,
                                        int n, double t0, double t_L,
                                        double sigma_et, const Context& ctx) {
    if (std::abs(n) > spectrum.m_max())
        throw std::invalid_argument(
            "modulated_amplitudes_retained: |n| exceeds the spectrum's m_max");
    const double w21 = ctx.tls.omega21();
    Increment inc;
    inc.dC2 = modulated_direction(+w21, tls.C1, spectrum, t0, t_L, sigma_et,
                                  ctx, n, n);
    inc.dC1 = modulated_direction(-w21, tls.C2, spectrum, t0, t_L, sigma_et,
                                  ctx, -n, -n);
    return inc;
}

TransitionReport modulated_increment(const TlsAmplitudes& tls,
                                     const ModulationSpectrum& spectrum,
                                     double t0, double t_L, double sigma_et,
                                     const Context& ctx, WarningSink warnings) {
    return post_probability(
        tls, modulated_amplitudes(tls, spectrum, t0, t_L, sigma_et, ctx, warnings));
}

void TrainSpec::validate() const {
    if (n_electrons < 1)
        throw std::invalid_argument("TrainSpec: n_electrons must be >= 1");
    if (arrival_law != ArrivalLaw::fixed_list && !(omega_b > 0.0))
        throw std::invalid_argument("TrainSpec: omega_b must be > 0");
    if (harmonic < 1)
        throw std::invalid_argument("TrainSpec: harmonic must be >= 1");
    if (arrival_law == ArrivalLaw::fixed_list &&
        fixed_arrivals.size() != static_cast<std::size_t>(n_electrons))
        throw std::invalid_argument(
            "TrainSpec: fixed_arrivals size must equal n_electrons");
}

std::vector<double> draw_arrivals(const TrainSpec& spec) {
    spec.validate();
    if (spec.arrival_law == TrainSpec::ArrivalLaw::fixed_list)
        return spec.fixed_arrivals;

    const double period = 2.0 * std::numbers::pi / spec.omega_b;
    rng::CounterRng rng(spec.seed, /*stream=*/0);
    std::vector<double> t(static_cast<std::size_t>(spec.n_electrons));
    if (spec.arrival_law == TrainSpec::ArrivalLaw::in_phase) {
        for (auto& v : t)
            v = spec.t_00 +
                static_cast<double>(rng.next_below(1000000)) * period;
    } else {
        for (auto& v : t) v = rng.uniform(0.0, period);
    }
    return t;
}

std::vector<double> draw_phases(const TrainSpec& spec) {
    spec.validate();
    std::vector<double> p(static_cast<std::size_t>(spec.n_electrons), spec.phi_0);
    if (spec.phase_law == TrainSpec::PhaseLaw::random_phi0) {
        // Stream 1 keeps the phase draws independent of the arrival draws.
        rng::CounterRng rng(spec.seed, /*stream=*/1);
        for (auto& v : p) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    return p;
}

TrainResult train_point_amplitude(const TrainSpec& spec, const Context& ctx,
                                  double sigma_et, WarningSink warnings) {
    if (!(sigma_et > 0.0))
        throw std::invalid_argument("train_point_amplitude: sigma_et must be > 0");
    const double w21 = ctx.tls.omega21();
    const double f_env = envelope_weight(w21, sigma_et);
    check_small_signal(spec.n_electrons,
                       coupling::coupling_constant_g(ctx.geom, ctx.tls, ctx.kin) *
                           f_env,
                       warnings);

    TrainResult out;
    out.arrivals = draw_arrivals(spec);
    std::complex<double> phase_sum = 0.0;
    for (double t0 : out.arrivals) phase_sum += std::polar(1.0, w21 * t0);
    out.C2 = amp_factor(w21, ctx) * f_env * phase_sum;
    out.p2 = std::norm(out.C2);
    return out;
}

CorrelatedResult correlated_train_probability(const TrainSpec& spec,
                                              const ModulationSpectrum& spectrum,
                                              double sigma_et, const Context& ctx,
                                              WarningSink warnings) {
    spec.validate();
    if (!(sigma_et > 0.0))
        throw std::invalid_argument(
            "correlated_train_probability: sigma_et must be > 0");
    if (!(spec.omega_b > 0.0) ||
        std::abs(spec.omega_b - spectrum.omega_b) >
            1e-12 * std::abs(spectrum.omega_b))
        throw std::invalid_argument(
            "correlated_train_probability: train and spectrum must share the "
            "same positive omega_b");
    const double g =
        coupling::coupling_constant_g(ctx.geom, ctx.tls, ctx.kin);
    const double fn =
        std::abs(spectrum.harmonic(std::min(spec.harmonic, spectrum.m_max())));
    check_small_signal(spec.n_electrons, g * fn, warnings);

    CorrelatedResult out;
    out.arrivals = draw_arrivals(spec);
    out.phases = draw_phases(spec);

    const TlsAmplitudes ground; // C1 = 1, C2 = 0
    for (std::size_t k = 0; k < out.arrivals.size(); ++k) {
        const double t0 = out.arrivals[k];
        const double t_L = (out.phases[k] + spec.omega_b * t0) / spec.omega_b;
        const Increment inc = modulated_amplitudes(ground, spectrum, t0, t_L,
                                                   sigma_et, ctx,
                                                   k == 0 ? warnings : nullptr);
        out.C2 += inc.dC2;
    }
    out.p2 = std::norm(out.C2);
    return out;
}

} // namespace feberi::analytic
