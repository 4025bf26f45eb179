// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include "feberi/quantum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "feberi/constants.hpp"
#include "feberi/simd.hpp"

namespace feberi::quantum {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::complex<double> i_unit{0.0, 1.0};

/// Kinetic energy relative to the beam centre, rest/central offsets gauged
/// away: E(δ) = v₀δ + δ²/(2γ₀³m).
double kinetic_energy(double delta, const Kinematics& kin) {
    return kin.v0 * delta +
           delta * delta /
               (2.0 * std::pow(kin.gamma0, 3) * electron_mass);
}

/// Retained sideband count of the packet (0 for an unmodulated one).
int packet_m_max(const wavepacket::QewSpec& qew) {
    if (qew.kind != wavepacket::QewSpec::Kind::pinem_modulated) return 0;
    return wavepacket::sideband_cutoff(qew.g_L, 1e-10);
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Probability mass in the outermost strips (8 points per side).
double edge_mass(const JointState& state) {
    const std::size_t n = state.grid.n_z;
    const std::size_t w = std::min<std::size_t>(8, n / 4);
    double mass = 0.0;
    for (const auto& c : state.components) {
        double s = 0.0;
        s += simd::norm_sq(c.psi1.data(), w);
        s += simd::norm_sq(c.psi2.data(), w);
        s += simd::norm_sq(c.psi1.data() + (n - w), w);
        s += simd::norm_sq(c.psi2.data() + (n - w), w);
        mass += c.weight * s;
    }
    return mass * state.grid.dz;
}

} // namespace

// ---------------------------------------------------------------------------
// TlsDensityMatrix
// ---------------------------------------------------------------------------

TlsDensityMatrix TlsDensityMatrix::ground() {
    TlsDensityMatrix r;
    r(0, 0) = 1.0;
    return r;
}

TlsDensityMatrix TlsDensityMatrix::excited() {
    TlsDensityMatrix r;
    r(1, 1) = 1.0;
    return r;
}

TlsDensityMatrix TlsDensityMatrix::maximally_mixed() {
    TlsDensityMatrix r;
    r(0, 0) = 0.5;
    r(1, 1) = 0.5;
    return r;
}

TlsDensityMatrix TlsDensityMatrix::pure(std::complex<double> c1,
                                        std::complex<double> c2) {
    const double n = std::norm(c1) + std::norm(c2);
    if (!(n > 0.0))
        throw std::invalid_argument("TlsDensityMatrix::pure: zero state vector");
    TlsDensityMatrix r;
    r(0, 0) = std::norm(c1) / n;
    r(1, 1) = std::norm(c2) / n;
    r(0, 1) = c1 * std::conj(c2) / n;
    r(1, 0) = std::conj(r(0, 1));
    return r;
}

double TlsDensityMatrix::p2() const { return m[3].real(); }

double p2_of(const TlsDensityMatrix& rho) { return rho.p2(); }

double TlsDensityMatrix::purity() const {
    const double a = m[0].real();
    const double d = m[3].real();
    return a * a + d * d + 2.0 * std::norm(m[1]);
}

void TlsDensityMatrix::validate(double tol) const {
    for (const auto& v : m)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("TlsDensityMatrix: non-finite entry");
    if (std::abs(m[0].imag()) > tol || std::abs(m[3].imag()) > tol ||
        std::abs(m[1] - std::conj(m[2])) > tol)
        throw std::invalid_argument("TlsDensityMatrix: not Hermitian");
    const double a = m[0].real();
    const double d = m[3].real();
    if (std::abs(a + d - 1.0) > tol)
        throw std::invalid_argument("TlsDensityMatrix: trace differs from 1");
    const double half_gap = std::hypot(0.5 * (a - d), std::abs(m[1]));
    if (0.5 * (a + d) - half_gap < -tol)
        throw std::invalid_argument("TlsDensityMatrix: negative eigenvalue");
}

std::vector<PureComponent> decompose(const TlsDensityMatrix& rho, double tol) {
    rho.validate(tol);
    const double a = rho(0, 0).real();
    const double d = rho(1, 1).real();
    const std::complex<double> b = rho(0, 1);

    std::vector<PureComponent> out;
    if (std::abs(b) <= 1e-15 * std::max(1.0, std::abs(a) + std::abs(d))) {
        out.push_back({a, {1.0, 0.0}});
        out.push_back({d, {0.0, 1.0}});
    } else {
        const double disc = std::hypot(a - d, 2.0 * std::abs(b));
        for (double lambda : {0.5 * (a + d + disc), 0.5 * (a + d - disc)}) {
            std::array<std::complex<double>, 2> v{b, lambda - a};
            const double nrm =
                std::sqrt(std::norm(v[0]) + std::norm(v[1]));
            v[0] /= nrm;
            v[1] /= nrm;
            out.push_back({lambda, v});
        }
    }
    for (auto& c : out) c.weight = std::max(c.weight, 0.0);
    std::erase_if(out, [](const PureComponent& c) { return c.weight <= 1e-14; });
    if (out.empty())
        throw std::invalid_argument("decompose: density matrix has no weight");
    double sum = 0.0;
    for (const auto& c : out) sum += c.weight;
    for (auto& c : out) c.weight /= sum;
    std::sort(out.begin(), out.end(),
              [](const PureComponent& x, const PureComponent& y) {
                  return x.weight > y.weight;
              });
    return out;
}

TlsDensityMatrix to_schroedinger(const TlsDensityMatrix& rho_int, double t,
                                 const TlsSpec& tls) {
    TlsDensityMatrix r = rho_int;
    const std::complex<double> ph = std::polar(1.0, tls.omega21() * t);
    r(0, 1) *= ph;
    r(1, 0) = std::conj(r(0, 1));
    return r;
}

TlsDensityMatrix to_interaction(const TlsDensityMatrix& rho_sch, double t,
                                const TlsSpec& tls) {
    TlsDensityMatrix r = rho_sch;
    const std::complex<double> ph = std::polar(1.0, -tls.omega21() * t);
    r(0, 1) *= ph;
    r(1, 0) = std::conj(r(0, 1));
    return r;
}

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

double Grid::momentum_delta(std::size_t k) const {
    const double d_delta = two_pi * hbar / length();
    const auto half = n_z / 2;
    const double idx = (k < half) ? static_cast<double>(k)
                                  : static_cast<double>(k) - static_cast<double>(n_z);
    return idx * d_delta;
}

double default_time_step(const Kinematics& kin, const TlsSpec& tls) {
    return std::min(kin.t_r / 20.0, tls.period21() / 200.0);
}

double sideband_walk_time(const wavepacket::QewSpec& qew, const Kinematics& kin) {
    const int m_max = packet_m_max(qew);
    if (m_max == 0) return 0.0;
    const double dpl = hbar * qew.omega_b / kin.v0;
    const double phi_d = wavepacket::dispersion_phase(qew, kin);
    return m_max * 2.0 * hbar * std::abs(phi_d) / (dpl * kin.v0);
}

double interaction_half_window(const wavepacket::QewSpec& qew,
                               const Kinematics& kin) {
    return 4.0 * wavepacket::drifted_sigma_t(qew, kin) +
           sideband_walk_time(qew, kin) + 10.0 * kin.t_r;
}

Grid build_grid(const wavepacket::QewSpec& qew, const Kinematics& kin,
                const coupling::Geometry& geom, double t_total,
                const GridOptions& opts) {
    qew.validate();
    geom.validate();
    if (opts.support_sigmas < 6.0 || opts.guard_sigmas < 8.0 ||
        opts.points_per_rcut < 8.0)
        throw std::invalid_argument(
            "build_grid: margins below the supported minimum "
            "(support >= 6 sigma, guard >= 8 sigma, >= 8 points per kernel radius)");

    const double sigma_t = wavepacket::drifted_sigma_t(qew, kin);
    const double sigma_z = kin.v0 * sigma_t;
    if (!(t_total >= 6.0 * sigma_t + 20.0 * kin.t_r))
        throw std::invalid_argument(
            "build_grid: t_total shorter than the packet passage "
            "(need at least 6 sigma_t + 20 t_r)");

    const double walk_z = kin.v0 * sideband_walk_time(qew, kin);
    const double support_half = opts.support_sigmas * sigma_z + walk_z;
    const double guard = opts.guard_sigmas * sigma_z;
    const double l_min = kin.v0 * t_total + 2.0 * (support_half + guard);
    const double dz_max = (geom.r_perp0 / kin.gamma0) / opts.points_per_rcut;

    const auto n_req =
        static_cast<std::size_t>(std::ceil(l_min / dz_max));
    const std::size_t n_z = next_pow2(std::max<std::size_t>(n_req, 16));
    if (n_z > opts.max_points) {
        std::ostringstream msg;
        msg << "build_grid: span " << l_min << " nm at dz <= " << dz_max
            << " nm needs " << n_req << " points (next power of two " << n_z
            << "), above the ceiling " << opts.max_points
            << "; raise max_points or shrink the scenario";
        throw std::invalid_argument(msg.str());
    }

    Grid g;
    g.n_z = n_z;
    g.dz = l_min / static_cast<double>(n_z);
    g.z_min = -0.5 * static_cast<double>(n_z) * g.dz;
    return g;
}

// ---------------------------------------------------------------------------
// Joint state
// ---------------------------------------------------------------------------

double JointState::total_norm() const {
    double sum = 0.0;
    for (const auto& c : components)
        sum += c.weight * (simd::norm_sq(c.psi1.data(), grid.n_z) +
                           simd::norm_sq(c.psi2.data(), grid.n_z));
    return sum * grid.dz;
}

JointState initial_joint_state(const wavepacket::QewSpec& qew,
                               const Kinematics& kin,
                               const TlsDensityMatrix& rho_b_sch,
                               const Grid& grid, double t_start) {
    qew.validate();
    const std::size_t n = grid.n_z;
    if (n < 16 || (n & (n - 1)) != 0 || !(grid.dz > 0.0))
        throw std::invalid_argument(
            "initial_joint_state: grid must be a power-of-two build_grid result");
    const auto comps = decompose(rho_b_sch);

    const int m_max = packet_m_max(qew);
    fft::cvector field(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double delta = grid.momentum_delta(k);
        const std::complex<double> c =
            wavepacket::evaluate_c(qew, kin, delta, m_max);
        const double phase = (delta * grid.z_min -
                              kinetic_energy(delta, kin) * (t_start - qew.t0)) /
                             hbar;
        field[k] = c * std::polar(1.0, phase);
    }
    fft::transform(field.data(), n, 1, +1);

    const double norm = simd::norm_sq(field.data(), n) * grid.dz;
    if (!(norm > 0.0))
        throw std::invalid_argument("initial_joint_state: zero-norm packet");
    simd::cscale_inplace(field.data(), 1.0 / std::sqrt(norm), n);

    JointState state;
    state.grid = grid;
    for (const auto& pc : comps) {
        JointComponent jc;
        jc.weight = pc.weight;
        jc.psi1 = field;
        jc.psi2 = field;
        simd::cscale_inplace(jc.psi1.data(), pc.b[0], n);
        simd::cscale_inplace(jc.psi2.data(), pc.b[1], n);
        state.components.push_back(std::move(jc));
    }

    const double edge = edge_mass(state);
    if (edge > 1e-8) {
        std::ostringstream msg;
        msg << "initial_joint_state: packet does not fit the grid (edge mass "
            << edge << " > 1e-8); enlarge support_sigmas or max_points";
        throw std::invalid_argument(msg.str());
    }
    return state;
}

TlsDensityMatrix trace_out_electron(const JointState& state) {
    if (state.components.empty())
        throw std::invalid_argument("trace_out_electron: empty state");
    const std::size_t n = state.grid.n_z;
    TlsDensityMatrix rho;
    for (const auto& c : state.components) {
        // ρ_ij = Σ_z ψ_i ψ_j* Δz = ⟨ψ_j|ψ_i⟩ Δz.
        const double w = c.weight;
        rho(0, 0) += w * simd::norm_sq(c.psi1.data(), n);
        rho(1, 1) += w * simd::norm_sq(c.psi2.data(), n);
        rho(0, 1) += w * simd::inner_product(c.psi2.data(), c.psi1.data(), n);
    }
    for (auto& v : rho.m) v *= state.grid.dz;
    rho(1, 0) = std::conj(rho(0, 1));

    const double trace = rho(0, 0).real() + rho(1, 1).real();
    if (std::abs(trace - 1.0) > 1e-6)
        throw std::runtime_error("trace_out_electron: trace drifted from 1");
    for (auto& v : rho.m) v /= trace;
    rho(0, 0) = rho(0, 0).real();
    rho(1, 1) = rho(1, 1).real();
    return rho;
}

// ---------------------------------------------------------------------------
// Split-operator evolution
// ---------------------------------------------------------------------------

namespace {

/// Closed-form exp(−i dt W) tables over the kernel window, W(z) =
/// [[0, M(z)/ħ], [M(z)/ħ, ω21]]; outside the window M ≈ 0 and the step
/// reduces to a uniform phase on ψ₂.
struct VTables {
    std::size_t i_lo = 0, i_hi = 0; // interior window [i_lo, i_hi)
    fft::cvector u11, u12, u22;
    std::complex<double> outside2{1.0, 0.0};
};

VTables make_v_tables(const Grid& grid, const coupling::Geometry& geom,
                      const TlsSpec& tls, const Kinematics& kin, double dt) {
    const double z_cut = coupling::truncation_radius(geom, kin);
    const double w = tls.omega21();

    VTables t;
    std::size_t lo = grid.n_z, hi = 0;
    for (std::size_t i = 0; i < grid.n_z; ++i) {
        if (std::abs(grid.z(i)) <= z_cut) {
            lo = std::min(lo, i);
            hi = std::max(hi, i + 1);
        }
    }
    if (lo >= hi) { // kernel window narrower than one cell: centre point only
        lo = grid.n_z / 2;
        hi = lo + 1;
    }
    t.i_lo = lo;
    t.i_hi = hi;

    const std::size_t len = hi - lo;
    t.u11.resize(len);
    t.u12.resize(len);
    t.u22.resize(len);
    const std::complex<double> common = std::polar(1.0, -0.5 * w * dt);
    for (std::size_t i = 0; i < len; ++i) {
        const double a =
            coupling::dipole_kernel(grid.z(lo + i), geom, tls, kin) / hbar;
        const double omega = std::hypot(a, 0.5 * w);
        const double c = std::cos(omega * dt);
        const double s = std::sin(omega * dt) / omega;
        t.u11[i] = common * (c + i_unit * (0.5 * w * s));
        t.u12[i] = common * (-i_unit * (a * s));
        t.u22[i] = common * (c - i_unit * (0.5 * w * s));
    }
    t.outside2 = std::polar(1.0, -w * dt);
    return t;
}

void apply_v(JointState& state, const VTables& t) {
    const std::size_t n = state.grid.n_z;
    const std::size_t len = t.i_hi - t.i_lo;
    for (auto& c : state.components) {
        simd::rotate2_inplace(c.psi1.data() + t.i_lo, c.psi2.data() + t.i_lo,
                              t.u11.data(), t.u12.data(), t.u22.data(), len);
        if (t.i_lo > 0)
            simd::cscale_inplace(c.psi2.data(), t.outside2, t.i_lo);
        if (t.i_hi < n)
            simd::cscale_inplace(c.psi2.data() + t.i_hi, t.outside2,
                                 n - t.i_hi);
    }
}

void apply_kinetic(JointState& state, const fft::cvector& phase) {
    const std::size_t n = state.grid.n_z;
    for (auto& c : state.components) {
        fft::transform(c.psi1.data(), n, 1, -1);
        simd::cmul_inplace(c.psi1.data(), phase.data(), n);
        fft::transform(c.psi1.data(), n, 1, +1);
        fft::transform(c.psi2.data(), n, 1, -1);
        simd::cmul_inplace(c.psi2.data(), phase.data(), n);
        fft::transform(c.psi2.data(), n, 1, +1);
    }
}

} // namespace

EvolveResult evolve(JointState& state, const coupling::Geometry& geom,
                    const TlsSpec& tls, const Kinematics& kin, double dt,
                    std::size_t n_steps, const EvolveOptions& opts) {
    if (!(dt > 0.0) || n_steps == 0)
        throw std::invalid_argument("evolve: need dt > 0 and n_steps >= 1");
    if (state.components.empty())
        throw std::invalid_argument("evolve: empty state");
    const std::size_t n = state.grid.n_z;
    for (const auto& c : state.components)
        if (c.psi1.size() != n || c.psi2.size() != n)
            throw std::invalid_argument("evolve: field size does not match grid");

    fft::cvector kphase(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
        kphase[k] =
            std::polar(inv_n, -dt * kinetic_energy(state.grid.momentum_delta(k),
                                                   kin) /
                                  hbar);

    const VTables v_full = make_v_tables(state.grid, geom, tls, kin, dt);
    const VTables v_half = make_v_tables(state.grid, geom, tls, kin, 0.5 * dt);

    std::vector<char> mark(n_steps + 1, 0);
    if (opts.n_samples > 0)
        for (std::size_t j = 1; j <= opts.n_samples; ++j)
            mark[j * n_steps / opts.n_samples] = 1;
    mark[n_steps] = 1;

    EvolveResult result;
    const auto record = [&](std::size_t step) {
        const double t = opts.t_start + static_cast<double>(step) * dt;
        double p2 = 0.0;
        double norm_err = 0.0;
        for (const auto& c : state.components) {
            const double n1 = simd::norm_sq(c.psi1.data(), n) * state.grid.dz;
            const double n2 = simd::norm_sq(c.psi2.data(), n) * state.grid.dz;
            p2 += c.weight * n2;
            norm_err = std::max(norm_err, std::abs(n1 + n2 - 1.0));
        }
        const double edge = edge_mass(state);
        result.norm_error = std::max(result.norm_error, norm_err);
        result.max_edge_mass = std::max(result.max_edge_mass, edge);
        result.samples.push_back({t, p2});
        if (norm_err > 1e-8) {
            std::ostringstream msg;
            msg << "evolve: stability error, norm drift " << norm_err
                << " at t = " << t;
            throw std::runtime_error(msg.str());
        }
        if (edge > 1e-8) {
            std::ostringstream msg;
            msg << "evolve: grid error, boundary probability mass " << edge
                << " at t = " << t;
            throw std::runtime_error(msg.str());
        }
    };

    record(0);
    apply_v(state, v_half);
    for (std::size_t s = 1; s <= n_steps; ++s) {
        apply_kinetic(state, kphase);
        if (mark[s]) {
            apply_v(state, v_half);
            record(s);
            if (s < n_steps) apply_v(state, v_half);
        } else {
            apply_v(state, v_full);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Single electron and trains
// ---------------------------------------------------------------------------

SingleResult run_single(const wavepacket::QewSpec& qew,
                        const TlsDensityMatrix& rho_b_int,
                        const coupling::Geometry& geom, const TlsSpec& tls,
                        const Kinematics& kin, const SingleOptions& opts) {
    const double dt = opts.dt > 0.0 ? opts.dt : default_time_step(kin, tls);
    const double t_half = interaction_half_window(qew, kin);
    const auto n_steps =
        static_cast<std::size_t>(std::ceil(2.0 * t_half / dt));
    const double t_ws = qew.t0 - t_half;
    const double t_we = t_ws + static_cast<double>(n_steps) * dt;

    const Grid grid = build_grid(qew, kin, geom, 2.0 * t_half, opts.grid);
    const TlsDensityMatrix rho_sch = to_schroedinger(rho_b_int, t_ws, tls);
    JointState state = initial_joint_state(qew, kin, rho_sch, grid, t_ws);
    const EvolveResult ev =
        evolve(state, geom, tls, kin, dt, n_steps, {opts.n_samples, t_ws});

    SingleResult out;
    out.rho_after = to_interaction(trace_out_electron(state), t_we, tls);
    out.p2 = out.rho_after.p2();
    out.t_start = t_ws;
    out.t_end = t_we;
    out.trajectory = ev.samples;
    out.norm_error = ev.norm_error;
    out.max_edge_mass = ev.max_edge_mass;
    out.n_z = grid.n_z;
    out.n_steps = n_steps;
    out.dt = dt;
    return out;
}

namespace {

using Mat2 = std::array<std::complex<double>, 4>; // row-major 2×2

Mat2 scaled(const Mat2& m, std::complex<double> s) {
    return {m[0] * s, m[1] * s, m[2] * s, m[3] * s};
}

void accumulate(Mat2& acc, const Mat2& m, std::complex<double> s) {
    for (int i = 0; i < 4; ++i) acc[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(i)] * s;
}

Mat2 dagger(const Mat2& m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

} // namespace

TlsDensityMatrix InteractionChannel::apply(const TlsDensityMatrix& rho_int,
                                           double t0, double phi0) const {
    if (coeff_.empty())
        throw std::logic_error("InteractionChannel: not built");
    rho_int.validate(1e-8);

    const double psi = phi0 + omega_b * t0;
    // E(ψ) = Σ_d ĉ_d e^{i d ψ}; entries 0..3 = E11, 4..7 = E22, 8..11 = E12.
    std::array<std::complex<double>, 12> e{};
    const auto deg = static_cast<std::size_t>(degree_);
    for (std::size_t idx = 0; idx < coeff_.size(); ++idx) {
        const double d =
            static_cast<double>(idx) - static_cast<double>(deg);
        const std::complex<double> ph = std::polar(1.0, d * psi);
        for (std::size_t j = 0; j < 12; ++j) e[j] += coeff_[idx][j] * ph;
    }
    const Mat2 e11{e[0], e[1], e[2], e[3]};
    const Mat2 e22{e[4], e[5], e[6], e[7]};
    const Mat2 e12{e[8], e[9], e[10], e[11]};

    // Rotate the input into the reference electron's frame, apply, rotate back.
    const std::complex<double> rot = std::polar(1.0, omega21 * t0);
    const std::complex<double> r11 = rho_int(0, 0);
    const std::complex<double> r22 = rho_int(1, 1);
    const std::complex<double> r12 = rho_int(0, 1) * rot;

    Mat2 out = scaled(e11, r11);
    accumulate(out, e22, r22);
    accumulate(out, e12, r12);
    accumulate(out, dagger(e12), std::conj(r12));

    TlsDensityMatrix rho;
    rho(0, 0) = out[0];
    rho(0, 1) = out[1] * std::conj(rot);
    rho(1, 0) = out[2] * rot;
    rho(1, 1) = out[3];

    // Hermitize and renormalize away numerical rounding.
    rho(0, 1) = 0.5 * (rho(0, 1) + std::conj(rho(1, 0)));
    rho(1, 0) = std::conj(rho(0, 1));
    rho(0, 0) = rho(0, 0).real();
    rho(1, 1) = rho(1, 1).real();
    const double trace = rho(0, 0).real() + rho(1, 1).real();
    if (std::abs(trace - 1.0) > 1e-6)
        throw std::runtime_error("InteractionChannel::apply: trace drifted");
    for (auto& v : rho.m) v /= trace;
    return rho;
}

InteractionChannel build_interaction_channel(
    const wavepacket::QewSpec& qew_template, const coupling::Geometry& geom,
    const TlsSpec& tls, const Kinematics& kin, const SingleOptions& opts,
    int n_phi_override) {
    wavepacket::QewSpec spec0 = qew_template;
    spec0.t0 = 0.0;
    spec0.validate();

    const int m_max = packet_m_max(spec0);
    const int degree = 2 * m_max;
    const int n_min = 2 * degree + 1;
    const int n_phi = n_phi_override == 0 ? n_min : n_phi_override;
    if (n_phi < n_min)
        throw std::invalid_argument(
            "build_interaction_channel: n_phi below the exact-interpolation "
            "minimum 4*m_max + 1");

    const double dt = opts.dt > 0.0 ? opts.dt : default_time_step(kin, tls);
    const double t_half = interaction_half_window(spec0, kin);
    const auto n_steps =
        static_cast<std::size_t>(std::ceil(2.0 * t_half / dt));
    const double t_ws = -t_half;
    const double t_we = t_ws + static_cast<double>(n_steps) * dt;
    const Grid grid = build_grid(spec0, kin, geom, 2.0 * t_half, opts.grid);
    const std::size_t n = grid.n_z;

    const double w21 = tls.omega21();
    const std::complex<double> r2 = std::polar(1.0, -w21 * t_ws);
    const std::complex<double> rwe = std::polar(1.0, -w21 * t_we);

    std::vector<std::array<std::complex<double>, 12>> samples(
        static_cast<std::size_t>(n_phi));
    const auto tabulate_phase = [&](int k) {
        wavepacket::QewSpec spec_k = spec0;
        spec_k.phi_0 = two_pi * static_cast<double>(k) / n_phi;

        // Two basis evolutions sharing the same electron packet.
        JointState s1 = initial_joint_state(spec_k, kin,
                                            TlsDensityMatrix::ground(), grid,
                                            t_ws);
        JointState s2;
        s2.grid = grid;
        {
            JointComponent jc;
            jc.weight = 1.0;
            jc.psi1.assign(n, {0.0, 0.0});
            jc.psi2 = s1.components[0].psi1;
            s2.components.push_back(std::move(jc));
        }
        evolve(s1, geom, tls, kin, dt, n_steps, {0, t_ws});
        evolve(s2, geom, tls, kin, dt, n_steps, {0, t_ws});
        const auto& p1 = s1.components[0];
        const auto& p2 = s2.components[0];

        // Cross-Grams G[i][j]_ab = Σ_z Ψ^{(i)}_a Ψ^{(j)}_b* Δz, dressed into
        // the interaction picture: E[i][j] = r_i r_j* · R(t_we)† G R(t_we).
        const auto gram = [&](const JointComponent& x, const JointComponent& y) {
            Mat2 g;
            g[0] = simd::inner_product(y.psi1.data(), x.psi1.data(), n);
            g[1] = simd::inner_product(y.psi2.data(), x.psi1.data(), n);
            g[2] = simd::inner_product(y.psi1.data(), x.psi2.data(), n);
            g[3] = simd::inner_product(y.psi2.data(), x.psi2.data(), n);
            for (auto& v : g) v *= grid.dz;
            // R† G R with R = diag(1, rwe).
            g[1] *= rwe;
            g[2] *= std::conj(rwe);
            return g;
        };
        const Mat2 e11 = gram(p1, p1);
        const Mat2 e22 = scaled(gram(p2, p2), r2 * std::conj(r2)); // |r2|² = 1
        const Mat2 e12 = scaled(gram(p1, p2), std::conj(r2));

        auto& row = samples[static_cast<std::size_t>(k)];
        for (std::size_t j = 0; j < 4; ++j) {
            row[j] = e11[j];
            row[4 + j] = e22[j];
            row[8 + j] = e12[j];
        }
    };

    // The basis pairs are independent, dominate the tabulation cost, and each
    // writes only its own samples slot, so a small pool scales them across
    // cores without changing any result (plan execution on distinct arrays is
    // thread-safe; planning itself stays serialized behind the FFT module's
    // planner lock).
    const unsigned hw = std::thread::hardware_concurrency();
    const int n_workers =
        std::min(n_phi, std::clamp(static_cast<int>(hw == 0 ? 1 : hw), 1, 16));
    if (n_workers <= 1) {
        for (int k = 0; k < n_phi; ++k) tabulate_phase(k);
    } else {
        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        const auto worker = [&]() {
            for (;;) {
                const int k = next.fetch_add(1);
                if (k >= n_phi || failed.load()) return;
                try {
                    tabulate_phase(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    InteractionChannel ch;
    ch.n_phi_ = n_phi;
    ch.degree_ = degree;
    ch.omega_b = m_max > 0 ? spec0.omega_b : 0.0;
    ch.omega21 = w21;
    ch.n_z_ = n;
    ch.n_steps_ = n_steps;
    ch.dt_ = dt;
    ch.coeff_.assign(static_cast<std::size_t>(2 * degree + 1), {});
    for (int d = -degree; d <= degree; ++d) {
        auto& row = ch.coeff_[static_cast<std::size_t>(d + degree)];
        for (int k = 0; k < n_phi; ++k) {
            const std::complex<double> ph =
                std::polar(1.0 / n_phi, -d * two_pi * static_cast<double>(k) / n_phi);
            const auto& s = samples[static_cast<std::size_t>(k)];
            for (std::size_t j = 0; j < 12; ++j) row[j] += s[j] * ph;
        }
    }
    return ch;
}

std::vector<RunRecord> run_train(const analytic::TrainSpec& train,
                                 const wavepacket::QewSpec& qew_template,
                                 const TlsDensityMatrix& rho0_int,
                                 const coupling::Geometry& geom,
                                 const TlsSpec& tls, const Kinematics& kin,
                                 const TrainOptions& opts) {
    train.validate();
    rho0_int.validate();
    if (qew_template.kind == wavepacket::QewSpec::Kind::pinem_modulated &&
        std::abs(train.omega_b - qew_template.omega_b) >
            1e-12 * std::abs(qew_template.omega_b))
        throw std::invalid_argument(
            "run_train: train and packet must share the same omega_b");

    const auto arrivals = analytic::draw_arrivals(train);
    const auto phases = analytic::draw_phases(train);

    std::vector<RunRecord> records;
    records.reserve(arrivals.size());
    TlsDensityMatrix rho = rho0_int;

    if (opts.method == TrainMethod::channel) {
        if (opts.samples_per_electron > 0)
            throw std::invalid_argument(
                "run_train: trajectory sampling requires the direct method");
        std::optional<InteractionChannel> own;
        const InteractionChannel* ch = opts.channel;
        if (!ch) {
            SingleOptions single;
            single.n_samples = 0;
            single.dt = opts.dt;
            single.grid = opts.grid;
            own.emplace(build_interaction_channel(qew_template, geom, tls, kin, single));
            ch = &*own;
        }
        for (std::size_t k = 0; k < arrivals.size(); ++k) {
            rho = ch->apply(rho, arrivals[k], phases[k]);
            records.push_back({arrivals[k], phases[k], rho, rho.p2(), {}});
        }
        return records;
    }

    SingleOptions single;
    single.n_samples = opts.samples_per_electron;
    single.dt = opts.dt;
    single.grid = opts.grid;
    for (std::size_t k = 0; k < arrivals.size(); ++k) {
        wavepacket::QewSpec spec = qew_template;
        spec.t0 = arrivals[k];
        spec.phi_0 = phases[k];
        SingleResult res = run_single(spec, rho, geom, tls, kin, single);
        rho = res.rho_after;
        records.push_back({arrivals[k], phases[k], rho, res.p2,
                           std::move(res.trajectory)});
    }
    return records;
}

} // namespace feberi::quantum
