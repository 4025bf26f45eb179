// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Exact joint-wavefunction solver: one free electron ⊗ two-level system on a
// position grid, evolved by a symmetric split-operator scheme (spectral
// kinetic steps, closed-form 2×2 interaction rotations), partial trace to the
// TLS density matrix, and the sequential multi-electron train procedure.
//
// Picture bookkeeping: between electrons the TLS state is carried in the
// interaction picture referenced to t = 0, i.e. coherences are quoted with the
// free precession e^{−iω21 t} removed. Populations (and hence P₂) are
// picture-independent. run_single/run_train accept and return this
// representation; evolve() itself works on raw Schrödinger-picture fields.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "feberi/analytic.hpp"
#include "feberi/coupling.hpp"
#include "feberi/fft.hpp"
#include "feberi/physical.hpp"
#include "feberi/wavepacket.hpp"

namespace feberi::quantum {

using physical::Kinematics;
using physical::TlsSpec;

// ---------------------------------------------------------------------------
// TLS density matrix
// ---------------------------------------------------------------------------

/// 2×2 bound-electron density matrix in the {|1⟩, |2⟩} energy basis,
/// row-major storage: (i, j) ∈ {0, 1}² ↦ m[2i + j].
struct TlsDensityMatrix {
    std::array<std::complex<double>, 4> m{};

    std::complex<double>& operator()(int i, int j) { return m[static_cast<std::size_t>(2 * i + j)]; }
    const std::complex<double>& operator()(int i, int j) const {
        return m[static_cast<std::size_t>(2 * i + j)];
    }

    static TlsDensityMatrix ground();
    static TlsDensityMatrix excited();
    static TlsDensityMatrix maximally_mixed();
    /// Pure state c1|1⟩ + c2|2⟩, normalized; throws if both amplitudes vanish.
    static TlsDensityMatrix pure(std::complex<double> c1, std::complex<double> c2);

    /// Upper-level population P₂ = Re ρ₂₂.
    double p2() const;
    /// Purity Tr ρ².
    double purity() const;

    /// Throws std::invalid_argument unless Hermitian and trace-1 to tol and
    /// both eigenvalues ≥ −tol.
    void validate(double tol = 1e-10) const;
};

/// P₂ = ⟨2|ρ|2⟩ (real part of the lower-right entry).
double p2_of(const TlsDensityMatrix& rho);

/// One eigenpair of a TLS density matrix: ρ = Σ weight·|b⟩⟨b|.
struct PureComponent {
    double weight = 0.0;
    std::array<std::complex<double>, 2> b{};
};

/// Spectral decomposition into ≤ 2 pure components, weights descending and
/// renormalized to Σ = 1; eigenvalues in [−tol, 0) are clamped to zero and
/// zero-weight components dropped. Validates ρ first.
std::vector<PureComponent> decompose(const TlsDensityMatrix& rho, double tol = 1e-10);

/// Picture conversions with R(t) = diag(1, e^{−iω21 t}):
/// ρ_sch = R ρ_int R†  (off-diagonal ρ₁₂ gains e^{+iω21 t}).
TlsDensityMatrix to_schroedinger(const TlsDensityMatrix& rho_int, double t, const TlsSpec& tls);
TlsDensityMatrix to_interaction(const TlsDensityMatrix& rho_sch, double t, const TlsSpec& tls);

// ---------------------------------------------------------------------------
// Spatial grid
// ---------------------------------------------------------------------------

struct GridOptions {
    /// Initial-support half-width kept on grid, in units of the (drifted)
    /// packet length σ_z; must be ≥ 6.
    double support_sigmas = 6.0;
    /// Guard margin beyond support and travel, in units of σ_z; must be ≥ 8.
    double guard_sigmas = 8.0;
    /// Kernel resolution: Δz ≤ (r_⊥0/γ)/points_per_rcut; must be ≥ 8.
    double points_per_rcut = 8.0;
    /// Hard ceiling on the number of grid points (build_grid fails loudly
    /// above it rather than silently coarsening).
    std::size_t max_points = std::size_t{1} << 20;
};

/// Uniform position grid with the TLS at z = 0 (exactly on a grid point,
/// index n_z/2) and FFT-ordered conjugate momentum offsets δ.
struct Grid {
    double z_min = 0.0;
    double dz = 0.0;
    std::size_t n_z = 0;

    double z(std::size_t i) const { return z_min + static_cast<double>(i) * dz; }
    double length() const { return static_cast<double>(n_z) * dz; }
    /// FFT-ordered momentum offset from p₀: index k ↦ 2πħ/L · (k or k − n_z).
    double momentum_delta(std::size_t k) const;
};

/// Sizes the grid for one electron's full passage: span = v₀·t_total plus the
/// packet support (including any dispersive sideband walk-off) plus guard
/// margin on both sides; Δz resolves the near-field kernel. Throws
/// std::invalid_argument on an undersized t_total, options below their
/// minima, or a point count above opts.max_points.
Grid build_grid(const wavepacket::QewSpec& qew, const Kinematics& kin,
                const coupling::Geometry& geom, double t_total,
                const GridOptions& opts = {});

/// dt = min(t_r/20, T₂₁/200): resolves both the kernel transit and the TLS
/// precession.
double default_time_step(const Kinematics& kin, const TlsSpec& tls);

/// Dispersive group-delay walk-off of the outermost retained sideband
/// relative to the envelope centroid, in fs (zero for an unmodulated packet):
/// each sideband m arrives offset by m·2ħφ_D/(δp_L v₀) after the drift.
double sideband_walk_time(const wavepacket::QewSpec& qew, const Kinematics& kin);

/// Half-width of the interaction window: 4σ_t (drifted) + sideband walk-off
/// + 10 t_r, covering the full probability current past the TLS.
double interaction_half_window(const wavepacket::QewSpec& qew, const Kinematics& kin);

// ---------------------------------------------------------------------------
// Joint state
// ---------------------------------------------------------------------------

/// One pure component of the joint state: ψ_j(z) for TLS level j ∈ {1, 2}.
struct JointComponent {
    double weight = 1.0;
    fft::cvector psi1, psi2;
};

/// Mixture of pure joint components (≤ 2 from a TLS spectral decomposition);
/// each component is norm-1, weights sum to 1.
struct JointState {
    Grid grid;
    std::vector<JointComponent> components;

    /// Σ weight·(‖ψ₁‖² + ‖ψ₂‖²)·Δz.
    double total_norm() const;
};

/// Product state (electron packet) ⊗ (TLS state ρ_b, Schrödinger picture at
/// t_start): the packet is synthesized from the closed-form momentum
/// amplitudes of `wavepacket` (centroid crosses z = 0 at t = qew.t0) and
/// free-propagated to t_start. Throws if ρ_b is unphysical or the packet does
/// not fit the grid (edge mass > 1e-8).
JointState initial_joint_state(const wavepacket::QewSpec& qew, const Kinematics& kin,
                               const TlsDensityMatrix& rho_b_sch, const Grid& grid,
                               double t_start);

/// ρ_b[i][j] = Σ_weights λ Σ_z ψ_i(z) ψ_j*(z) Δz, Hermitized and normalized
/// by its trace (absorbing ≤ 1e-8 accumulated norm rounding).
TlsDensityMatrix trace_out_electron(const JointState& state);

// ---------------------------------------------------------------------------
// Split-operator evolution
// ---------------------------------------------------------------------------

struct Sample {
    double t = 0.0;
    double p2 = 0.0;
};

struct EvolveOptions {
    /// Number of intra-run P₂(t) samples (0 → record only the endpoints).
    std::size_t n_samples = 0;
    /// Absolute time of the state at entry (samples are stamped from here).
    double t_start = 0.0;
};

struct EvolveResult {
    std::vector<Sample> samples;   ///< includes t_start and the final time
    double norm_error = 0.0;       ///< max per-component |‖Ψ‖² − 1|
    double max_edge_mass = 0.0;    ///< max boundary-strip probability seen
};

/// Advances the state through n_steps symmetric split-operator steps of size
/// dt under kinetic dispersion (spectral, per TLS level) + interaction
/// (closed-form 2×2 rotation per grid point, kernel truncated at the
/// `coupling` truncation radius) + TLS level energies. Throws
/// std::runtime_error on norm drift > 1e-8 (stability) or boundary mass
/// > 1e-8 (grid too small).
EvolveResult evolve(JointState& state, const coupling::Geometry& geom,
                    const TlsSpec& tls, const Kinematics& kin, double dt,
                    std::size_t n_steps, const EvolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Single-electron pipeline and trains
// ---------------------------------------------------------------------------

struct SingleOptions {
    std::size_t n_samples = 400; ///< intra-run P₂(t) samples (0 → endpoints)
    double dt = 0.0;             ///< 0 → default_time_step
    GridOptions grid{};
};

struct SingleResult {
    TlsDensityMatrix rho_after;  ///< interaction picture, t = 0 reference
    double p2 = 0.0;
    double t_start = 0.0;        ///< window edges actually used
    double t_end = 0.0;
    std::vector<Sample> trajectory;
    double norm_error = 0.0;
    double max_edge_mass = 0.0;
    std::size_t n_z = 0;         ///< grid/stepping actually used
    std::size_t n_steps = 0;
    double dt = 0.0;
};

/// One electron end to end: builds the grid and interaction window around
/// qew.t0, converts ρ from the interaction picture, evolves, traces out, and
/// converts back. Deterministic; identical inputs give identical results.
SingleResult run_single(const wavepacket::QewSpec& qew,
                        const TlsDensityMatrix& rho_b_int,
                        const coupling::Geometry& geom, const TlsSpec& tls,
                        const Kinematics& kin, const SingleOptions& opts = {});

/// The interaction of one electron with the TLS, tabulated once as a
/// completely positive trace-preserving map on the interaction-picture TLS
/// state and reusable for any arrival time t₀ and modulation phase φ₀.
///
/// Basis: Φ(ρ) = Σ_{ij} ρ_ij·E[i][j] with E[i][j] = Φ(|i⟩⟨j|) obtained from
/// two basis evolutions per sampled phase. The packet's t₀/φ₀ dependence
/// enters only through (a) the comb phase ψ = φ₀ + ω_b t₀ and (b) a rigid
/// time translation, so Φ_{t₀,φ₀}(ρ) = R(t₀)†·Φ_{0,ψ}(R(t₀) ρ R(t₀)†)·R(t₀)
/// with R(t) = diag(1, e^{−iω21 t}). Each E entry is a trigonometric
/// polynomial in ψ of degree ≤ 2·m_max, so n_phi ≥ 4·m_max + 1 uniform phase
/// samples recover it exactly (discrete Fourier interpolation); an
/// unmodulated packet needs a single sample.
class InteractionChannel {
  public:
    /// Applies the map for an electron arriving at t0 with modulation phase
    /// phi0; input and output are interaction-picture (t = 0 reference).
    TlsDensityMatrix apply(const TlsDensityMatrix& rho_int, double t0,
                           double phi0) const;

    int n_phi() const { return n_phi_; }
    int degree() const { return degree_; }
    std::size_t n_z() const { return n_z_; }
    std::size_t n_steps() const { return n_steps_; }
    double dt() const { return dt_; }

    friend InteractionChannel build_interaction_channel(
        const wavepacket::QewSpec&, const coupling::Geometry&, const TlsSpec&,
        const Kinematics&, const SingleOptions&, int);

  private:
    // Fourier coefficients in ψ for the entries of E[1][1], E[2][2], E[1][2]
    // (E[2][1] = E[1][2]†); index d ∈ [−degree, degree] ↦ d + degree.
    std::vector<std::array<std::complex<double>, 12>> coeff_;
    int n_phi_ = 0;
    int degree_ = 0;
    double omega_b = 0.0;
    double omega21 = 0.0;
    std::size_t n_z_ = 0;
    std::size_t n_steps_ = 0;
    double dt_ = 0.0;
};

/// Builds the channel from 2·n_phi basis evolutions of the template packet
/// (t₀ = 0, φ₀ = 2πk/n_phi). n_phi_override = 0 picks the exact minimum
/// (4·m_max + 1, or 1 when unmodulated); an explicit override below that is
/// rejected.
InteractionChannel build_interaction_channel(
    const wavepacket::QewSpec& qew_template, const coupling::Geometry& geom,
    const TlsSpec& tls, const Kinematics& kin, const SingleOptions& opts = {},
    int n_phi_override = 0);

/// Per-electron record of a train run.
struct RunRecord {
    double t0 = 0.0;
    double phi0 = 0.0;
    TlsDensityMatrix rho_after;  ///< interaction picture, t = 0 reference
    double p2 = 0.0;
    std::vector<Sample> trajectory; ///< only in direct mode with sampling on
};

enum class TrainMethod {
    direct,  ///< one full evolution per electron (trajectories available)
    channel, ///< one tabulated channel applied per electron (fast, exact)
};

struct TrainOptions {
    TrainMethod method = TrainMethod::direct;
    std::size_t samples_per_electron = 0;
    double dt = 0.0; ///< 0 → default_time_step
    GridOptions grid{};
    /// Optional pre-built channel reused when method == channel, so that an
    /// ensemble of trains sharing one packet template pays the basis
    /// evolutions once. Must have been built from the same template packet,
    /// geometry, TLS and kinematics; the caller owns the lifetime.
    const InteractionChannel* channel = nullptr;
};

/// Sequential interaction of a seeded electron train with the TLS: for each
/// electron draw (t₀k, φ₀k) — identical draws to the analytic model — set up
/// the packet, interact, trace out, feed the TLS state forward. ρ₀ and the
/// recorded states are interaction-picture (t = 0 reference). Electrons are
/// processed in draw order (sparse-beam assumption: wavepacket overlap
/// between successive electrons is neglected).
std::vector<RunRecord> run_train(const analytic::TrainSpec& train,
                                 const wavepacket::QewSpec& qew_template,
                                 const TlsDensityMatrix& rho0_int,
                                 const coupling::Geometry& geom,
                                 const TlsSpec& tls, const Kinematics& kin,
                                 const TrainOptions& opts = {});

} // namespace feberi::quantum
