// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Closed-form (first/second-order) transition amplitudes and probabilities of
// the probabilistic model: single Gaussian packets, point-particle trains,
// modulated packets, and modulation-correlated beams.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "feberi/coupling.hpp"
#include "feberi/physical.hpp"
#include "feberi/wavepacket.hpp"

namespace feberi::analytic {

using physical::Kinematics;
using physical::TlsSpec;
using wavepacket::ModulationSpectrum;
using wavepacket::QewSpec;

/// Everything the amplitude formulas need about the target and beam.
struct Context {
    coupling::Geometry geom;
    TlsSpec tls;
    Kinematics kin;
};

/// TLS amplitudes in the interaction picture, referenced to t = 0 (they
/// coincide with the Schrödinger amplitudes at t = 0; the Schrödinger
/// amplitude of level 2 at time t is C2·e^{−iω21 t}).
struct TlsAmplitudes {
    std::complex<double> C1{1.0, 0.0};
    std::complex<double> C2{0.0, 0.0};

    double p2() const { return std::norm(C2); }
    /// Throws std::invalid_argument unless |C1|² + |C2|² = 1 within 1e-9.
    void validate() const;
};

/// Normalizes (C1, C2) onto the unit sphere.
TlsAmplitudes make_state(std::complex<double> c1, std::complex<double> c2);

/// First-order amplitude increments produced by one electron.
struct Increment {
    std::complex<double> dC1{0.0, 0.0};
    std::complex<double> dC2{0.0, 0.0};
};

/// Upper-level probability bookkeeping for one interaction:
/// p_post = p_prev + dp1 + dp2 exactly, with dp1 = 2 Re(C2* dC2) and
/// dp2 = |dC2|². Values are reported raw (no clamping).
struct TransitionReport {
    double p_prev = 0.0;
    double dp1 = 0.0;
    double dp2 = 0.0;
    double p_post = 0.0;
};

/// Optional sink for validity warnings (small-signal violations, envelope
/// preconditions). Messages are appended; a null sink discards them.
using WarningSink = std::vector<std::string>*;

/// Increment from a single unmodulated Gaussian packet arriving at t0:
///   ΔC_i = (1/iħv₀) C_j e^{i ω_ij t0} M̃(ω_ij/v₀) e^{−ω_ij² σ_et²/2},
/// evaluated for both directions (i,j) = (2,1) and (1,2).
Increment single_increment(const TlsAmplitudes& tls, double t0,
                           const QewSpec& qew, const Context& ctx);

/// Probability report for the level-2 occupation produced by an increment.
TransitionReport post_probability(const TlsAmplitudes& tls, const Increment& inc);

/// State after absorbing an increment. With renormalize the result is
/// projected back to the unit sphere (off by default: the small-signal
/// formulas accumulate raw amplitudes).
TlsAmplitudes apply_increment(const TlsAmplitudes& tls, const Increment& inc,
                              bool renormalize = false);

/// Increment from a modulated packet. The spectrum must be referenced to
/// zero modulation phase (wavepacket::bessel_spectrum with phi_0 = 0); the
/// modulation phase enters through t_L via ω_b t_L ≡ φ₀ + ω_b t0. Full sum:
///   ΔC_i = (1/iħv₀) C_j M̃(ω_ij/v₀) e^{i ω_ij t0}
///          · Σ_m f_m e^{−i m ω_b t_L} e^{−(ω_ij − m ω_b)² σ_et²/2}.
/// Warns (and still computes) when σ_et ≤ 2π/ω_b.
Increment modulated_amplitudes(const TlsAmplitudes& tls,
                               const ModulationSpectrum& spectrum, double t0,
                               double t_L, double sigma_et, const Context& ctx,
                               WarningSink warnings = nullptr);

/// Same, retaining only the resonant harmonic n for each direction (+n for
/// excitation, −n for de-excitation).
Increment modulated_amplitudes_retained(const TlsAmplitudes& tls,
                                        const ModulationSpectrum& spectrum,
                                        int n, double t0, double t_L,
                                        double sigma_et, const Context& ctx);

/// Report-producing wrapper around modulated_amplitudes.
TransitionReport modulated_increment(const TlsAmplitudes& tls,
                                     const ModulationSpectrum& spectrum,
                                     double t0, double t_L, double sigma_et,
                                     const Context& ctx,
                                     WarningSink warnings = nullptr);

/// Electron-train description.
struct TrainSpec {
    enum class ArrivalLaw { in_phase, uniform_random, fixed_list };
    enum class PhaseLaw { common_phi0, random_phi0 };

    int n_electrons = 1;
    ArrivalLaw arrival_law = ArrivalLaw::in_phase;
    PhaseLaw phase_law = PhaseLaw::common_phi0;
    double omega_b = 0.0;   ///< rad/fs, > 0
    int harmonic = 1;       ///< resonant harmonic n (ω_21 ≈ n ω_b)
    std::uint64_t seed = 0;
    double t_00 = 0.0;      ///< first-arrival reference, fs
    double phi_0 = 0.0;     ///< shared modulation phase under common_phi0, rad
    std::vector<double> fixed_arrivals; ///< used by ArrivalLaw::fixed_list

    void validate() const;
};

/// Draws the arrival times t_{0k} of a train:
///   in_phase:       t_{0k} = t_00 + n_k·T_b, n_k uniform integers in [0, 1e6)
///   uniform_random: t_{0k} uniform in [0, T_b)
///   fixed_list:     spec.fixed_arrivals (must match n_electrons)
std::vector<double> draw_arrivals(const TrainSpec& spec);

/// Draws the modulation phases φ_{0k} of a train:
///   common_phi0: every entry equals spec.phi_0
///   random_phi0: uniform in [0, 2π), from a stream independent of the
///                arrival draws (same seed, different substream)
std::vector<double> draw_phases(const TrainSpec& spec);

/// Accumulated upper-level amplitude and probability of a point-particle
/// train from the ground state:
///   C_2 = (1/iħv₀) M̃(ω21/v₀) e^{−Γ²/2} Σ_k e^{i ω_21 t_{0k}},  P_2 = |C_2|².
/// Warns when N·g·e^{−Γ²/2} > 0.3 (small-signal breakdown).
struct TrainResult {
    std::complex<double> C2{0.0, 0.0};
    double p2 = 0.0;
    std::vector<double> arrivals;
};
TrainResult train_point_amplitude(const TrainSpec& spec, const Context& ctx,
                                  double sigma_et, WarningSink warnings = nullptr);

/// Accumulated upper-level probability of a train of modulated packets
/// (ground-state start): C_2 = Σ_k ΔC_2(t_{0k}, t_{Lk}) with
/// ω_b t_{Lk} = φ_{0k} + ω_b t_{0k}; φ_{0k} is shared under common_phi0 and
/// uniform in [0, 2π) under random_phi0. At resonance ω_21 = n ω_b with a
/// common phase, P_2 = N² g² |f_n|² independent of the arrival times.
struct CorrelatedResult {
    std::complex<double> C2{0.0, 0.0};
    double p2 = 0.0;
    std::vector<double> arrivals;
    std::vector<double> phases;
};
CorrelatedResult correlated_train_probability(const TrainSpec& spec,
                                              const ModulationSpectrum& spectrum,
                                              double sigma_et, const Context& ctx,
                                              WarningSink warnings = nullptr);

} // namespace feberi::analytic
