// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include "feberi/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

#include "feberi/constants.hpp"
#include "feberi/fit.hpp"
#include "feberi/quantity.hpp"
#include "feberi/quantum.hpp"

namespace feberi::scenario {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using physical::Dimension;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// ---------------------------------------------------------------------------
// formatting helpers
// ---------------------------------------------------------------------------

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quantity_string(double v, const char* unit) {
    std::string s = g17(v);
    if (unit[0] != '\0') s += std::string(" ") + unit;
    return s;
}

/// "0.50" → "0p50": file-name tag for a σ̄ scan value.
std::string sigma_tag(double sigma_bar) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", sigma_bar);
    std::string s = buf;
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

// ---------------------------------------------------------------------------
// JSON field helpers (strict: unknown keys and unit-less quantities fail)
// ---------------------------------------------------------------------------

std::string key_path(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail("config: " + (where.empty() ? std::string("top level") : where) +
                             " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known) fail("config: unknown key \"" + key_path(where, it.key()) + "\"");
    }
}

const char* quantity_example(Dimension dim) {
    switch (dim) {
    case Dimension::energy: return "200 keV";
    case Dimension::length: return "2 nm";
    case Dimension::time: return "2 fs";
    case Dimension::dipole: return "5 D";
    case Dimension::frequency: return "3.04 rad/fs";
    case Dimension::angle: return "0 rad";
    case Dimension::dimensionless: return "0.75";
    }
    return "";
}

double quantity_field(const json& v, const std::string& where, Dimension dim) {
    if (!v.is_string())
        fail("config: " + where + " must be a unit-suffixed string such as \"" +
             quantity_example(dim) + "\"");
    try {
        return physical::parse_quantity(v.get<std::string>(), dim);
    } catch (const std::invalid_argument& e) {
        fail("config: " + where + ": " + e.what());
    }
}

double number_field(const json& v, const std::string& where) {
    if (!v.is_number()) fail("config: " + where + " must be a number");
    return v.get<double>();
}

std::int64_t int_field(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail("config: " + where + " must be an integer");
    return v.get<std::int64_t>();
}

bool bool_field(const json& v, const std::string& where) {
    if (!v.is_boolean()) fail("config: " + where + " must be true or false");
    return v.get<bool>();
}

std::string string_field(const json& v, const std::string& where) {
    if (!v.is_string()) fail("config: " + where + " must be a string");
    return v.get<std::string>();
}

std::complex<double> complex_field(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail("config: " + where + " must be a number or a [re, im] pair");
}

// ---------------------------------------------------------------------------
// enum names
// ---------------------------------------------------------------------------

const char* arrival_law_name(analytic::TrainSpec::ArrivalLaw law) {
    switch (law) {
    case analytic::TrainSpec::ArrivalLaw::in_phase: return "in_phase";
    case analytic::TrainSpec::ArrivalLaw::uniform_random: return "uniform_random";
    case analytic::TrainSpec::ArrivalLaw::fixed_list: return "fixed_list";
    }
    return "?";
}

const char* phase_law_name(analytic::TrainSpec::PhaseLaw law) {
    return law == analytic::TrainSpec::PhaseLaw::common_phi0 ? "common_phi0"
                                                             : "random_phi0";
}

analytic::TrainSpec::ArrivalLaw arrival_law_from(const std::string& s,
                                                 const std::string& where) {
    if (s == "in_phase") return analytic::TrainSpec::ArrivalLaw::in_phase;
    if (s == "uniform_random") return analytic::TrainSpec::ArrivalLaw::uniform_random;
    if (s == "fixed_list") return analytic::TrainSpec::ArrivalLaw::fixed_list;
    fail("config: " + where + ": unknown arrival law \"" + s +
         "\" (expected in_phase, uniform_random or fixed_list)");
}

analytic::TrainSpec::PhaseLaw phase_law_from(const std::string& s,
                                             const std::string& where) {
    if (s == "common_phi0") return analytic::TrainSpec::PhaseLaw::common_phi0;
    if (s == "random_phi0") return analytic::TrainSpec::PhaseLaw::random_phi0;
    fail("config: " + where + ": unknown phase law \"" + s +
         "\" (expected common_phi0 or random_phi0)");
}

physical::TlsSpec::Orientation orientation_from(const std::string& s,
                                                const std::string& where) {
    if (s == "perpendicular") return physical::TlsSpec::Orientation::perpendicular;
    if (s == "longitudinal") return physical::TlsSpec::Orientation::longitudinal;
    fail("config: " + where + ": unknown orientation \"" + s +
         "\" (expected perpendicular or longitudinal)");
}

// ---------------------------------------------------------------------------
// derived bundle shared by the runners
// ---------------------------------------------------------------------------

struct Engine {
    physical::Kinematics kin;
    coupling::Geometry geom;
    analytic::Context ctx;
    double T21 = 0.0;
    double omega21 = 0.0;
    double g = 0.0;
};

Engine make_engine(const ScenarioConfig& cfg) {
    Engine e;
    e.kin = cfg.kinematics();
    e.geom = cfg.geometry();
    e.ctx = {e.geom, cfg.tls, e.kin};
    e.T21 = cfg.tls.period21();
    e.omega21 = cfg.tls.omega21();
    e.g = coupling::coupling_constant_g(e.geom, cfg.tls, e.kin);
    return e;
}

/// Scan value → σ_et in fs, honoring the configured scan normalization.
double scan_sigma_et(const ScenarioConfig& cfg, const Engine& e, double value) {
    return value * (cfg.scan_transit_units ? e.kin.t_r : e.T21);
}

/// Unmodulated Gaussian packet of the given envelope width (waist, no drift).
wavepacket::QewSpec gaussian_qew(double sigma_et) {
    wavepacket::QewSpec q;
    q.sigma_et = sigma_et;
    return q;
}

// Drift phase maximizing the fundamental density harmonic |f₁| of a
// |g_L| = 0.75 sideband comb (numerically optimized; |f₁| there is 0.5819).
constexpr double kOptimalPhiD075 = 0.6607737528437084;

double optimal_drift_length(const physical::BeamConfig& beam,
                            const physical::TlsSpec& tls) {
    const auto kin = physical::derive_kinematics(beam);
    const double delta_pL = hbar * tls.omega21() / kin.v0;
    const double gamma3m =
        kin.gamma0 * kin.gamma0 * kin.gamma0 * electron_mass;
    return kOptimalPhiD075 * 2.0 * gamma3m * hbar * kin.v0 / (delta_pL * delta_pL);
}

// ---------------------------------------------------------------------------
// dataset writer
// ---------------------------------------------------------------------------

struct Writer {
    fs::path dir;
    json files = json::array();
    std::vector<std::string> names;

    explicit Writer(const std::string& outdir) : dir(outdir) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw std::runtime_error("output: cannot create directory " +
                                         dir.string() + ": " + ec.message());
    }

    void text(const std::string& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary);
        out << content;
        if (!out) throw std::runtime_error("output: cannot write " + (dir / name).string());
        names.push_back(name);
    }

    void csv(const std::string& name, const std::vector<std::string>& columns,
             const std::vector<std::vector<double>>& rows) {
        std::string body;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) body += ',';
            body += columns[c];
        }
        body += '\n';
        for (const auto& row : rows) {
            if (row.size() != columns.size())
                throw std::runtime_error("output: row width mismatch in " + name);
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) body += ',';
                body += g17(row[c]);
            }
            body += '\n';
        }
        text(name, body);
        files.push_back({{"name", name},
                         {"rows", rows.size()},
                         {"columns", columns}});
    }
};

json sanity_entry(const std::string& name, bool pass, double measured,
                  const std::string& bound) {
    return json{{"name", name}, {"pass", pass}, {"measured", measured}, {"bound", bound}};
}

/// Clamped linear interpolation of a sampled P2 trajectory.
double interp_p2(const std::vector<quantum::Sample>& tr, double t) {
    if (tr.empty()) return kNan;
    if (t <= tr.front().t) return tr.front().p2;
    if (t >= tr.back().t) return tr.back().p2;
    auto it = std::upper_bound(tr.begin(), tr.end(), t,
                               [](double v, const quantum::Sample& s) { return v < s.t; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (hi.t == lo.t) ? 0.0 : (t - lo.t) / (hi.t - lo.t);
    return lo.p2 + w * (hi.p2 - lo.p2);
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ssq = 0.0;
    for (double x : v) ssq += (x - mean) * (x - mean);
    return std::sqrt(ssq / static_cast<double>(v.size() - 1));
}

quantum::SingleOptions single_options(const ScenarioConfig& cfg, std::size_t samples) {
    quantum::SingleOptions opts;
    opts.n_samples = samples;
    opts.dt = 0.0;
    opts.grid.max_points = cfg.max_points;
    return opts;
}

/// Zero-referenced Bessel spectrum of the configured modulation (the
/// modulation phase enters the analytic amplitudes through t_L).
wavepacket::ModulationSpectrum config_spectrum(const ScenarioConfig& cfg,
                                               const Engine& e) {
    wavepacket::QewSpec qew = cfg.make_qew(0.0, 0.0);
    const int m_max = wavepacket::sideband_cutoff(cfg.g_L);
    return wavepacket::bessel_spectrum(cfg.g_L, wavepacket::dispersion_phase(qew, e.kin),
                                       0.0, qew.omega_b, m_max);
}

// ---------------------------------------------------------------------------
// scenario runners
// ---------------------------------------------------------------------------

json run_fig2(const ScenarioConfig& cfg, const Engine& e, Writer& w) {
    constexpr int n = 801;
    constexpr double t_span = 10.0;
    std::vector<double> tbar(n);
    for (int i = 0; i < n; ++i)
        tbar[i] = -t_span + 2.0 * t_span * i / (n - 1);

    physical::TlsSpec tls_long = cfg.tls;
    tls_long.orientation = physical::TlsSpec::Orientation::longitudinal;
    physical::TlsSpec tls_perp = cfg.tls;
    tls_perp.orientation = physical::TlsSpec::Orientation::perpendicular;
    const coupling::Geometry geom_long = coupling::make_geometry(cfg.beam, tls_long);
    const coupling::Geometry geom_perp = coupling::make_geometry(cfg.beam, tls_perp);

    json per_sigma = json::array();
    json sanity = json::array();
    double worst_antisym = 0.0, worst_sym = 0.0;
    bool peaks_decreasing = true;
    double prev_peak = std::numeric_limits<double>::infinity();

    for (double scan_value : cfg.sigma_scan) {
        // weighed_strength works in transit-time units t̄ = t/t_r
        const double sb = scan_sigma_et(cfg, e, scan_value) / e.kin.t_r;
        const auto f_par = coupling::weighed_strength(tbar, sb, geom_long, tls_long, e.kin);
        const auto f_perp = coupling::weighed_strength(tbar, sb, geom_perp, tls_perp, e.kin);

        std::vector<std::vector<double>> rows(n);
        for (int i = 0; i < n; ++i) rows[i] = {tbar[i], f_par[i], f_perp[i]};
        w.csv("fig2_sigma_" + sigma_tag(sb) + ".csv", {"t_bar", "f_parallel", "f_perp"},
              rows);

        double peak_par = 0.0, peak_perp = 0.0, antisym = 0.0, sym = 0.0;
        for (int i = 0; i < n; ++i) {
            peak_par = std::max(peak_par, std::abs(f_par[i]));
            peak_perp = std::max(peak_perp, std::abs(f_perp[i]));
            antisym = std::max(antisym, std::abs(f_par[i] + f_par[n - 1 - i]));
            sym = std::max(sym, std::abs(f_perp[i] - f_perp[n - 1 - i]));
        }
        worst_antisym = std::max(worst_antisym, antisym);
        worst_sym = std::max(worst_sym, sym);
        if (peak_perp >= prev_peak) peaks_decreasing = false;
        prev_peak = peak_perp;

        per_sigma.push_back({{"sigma_bar_et", sb},
                             {"peak_f_parallel", peak_par},
                             {"peak_f_perp", peak_perp},
                             {"f_parallel_antisymmetry", antisym},
                             {"f_perp_asymmetry", sym}});
    }

    sanity.push_back(sanity_entry("f_parallel antisymmetric", worst_antisym < 1e-10,
                                  worst_antisym, "< 1e-10"));
    sanity.push_back(sanity_entry("f_perp symmetric", worst_sym < 1e-10, worst_sym,
                                  "< 1e-10"));
    sanity.push_back(sanity_entry("perpendicular peak decreases with packet size",
                                  peaks_decreasing, peaks_decreasing ? 1.0 : 0.0,
                                  "strictly decreasing over the scan"));

    json s;
    s["kernels"] = per_sigma;
    s["kernel_scale_eV"] = coupling::kernel_prefactor(geom_perp, tls_perp);
    s["sanity"] = sanity;
    return s;
}

json run_fig3(const ScenarioConfig& cfg, const Engine& e, Writer& w) {
    const bool do_q = cfg.model != Model::analytic;
    const bool do_a = cfg.model != Model::quantum;
    const auto ground_rho = quantum::TlsDensityMatrix::ground();
    const auto ground_amp = analytic::make_state({1.0, 0.0}, {0.0, 0.0});

    json s;
    json sanity = json::array();

    // (a) ground-state excitation probability vs packet size
    {
        std::vector<std::vector<double>> rows;
        std::vector<double> p2q;
        double a_first = kNan, a_last = kNan;
        for (double scan_value : cfg.sigma_scan) {
            const double sigma_et = scan_sigma_et(cfg, e, scan_value);
            const double sb = sigma_et / e.T21;
            double p2_a = kNan, p2_q = kNan;
            if (do_a) {
                const auto inc = analytic::single_increment(ground_amp, 0.0,
                                                            gaussian_qew(sigma_et), e.ctx);
                p2_a = analytic::post_probability(ground_amp, inc).p_post;
                if (std::isnan(a_first)) a_first = p2_a;
                a_last = p2_a;
            }
            if (do_q) {
                wavepacket::QewSpec qew = cfg.make_qew(0.0, cfg.phi_0);
                qew.sigma_et = sigma_et;
                const auto res = quantum::run_single(qew, ground_rho, e.geom, cfg.tls,
                                                     e.kin, single_options(cfg, 0));
                p2_q = res.p2;
                p2q.push_back(p2_q);
            }
            rows.push_back({sb, p2_q, p2_a});
        }
        w.csv("fig3a_ground.csv", {"sigma_over_T21", "P2_quantum", "P2_analytic"}, rows);

        if (do_q && p2q.size() >= 2) {
            const auto [mn, mx] = std::minmax_element(p2q.begin(), p2q.end());
            const double mean = std::accumulate(p2q.begin(), p2q.end(), 0.0) /
                                static_cast<double>(p2q.size());
            const double flatness = (*mx - *mn) / mean;
            s["ground_flatness_quantum"] = flatness;
            sanity.push_back(sanity_entry("quantum ground P2 size-independent",
                                          flatness < 0.05, flatness, "< 0.05 over the scan"));
        }
        if (do_a && cfg.sigma_scan.size() >= 2) {
            s["analytic_decay_ratio"] = a_first / a_last;
            const double G0 = e.omega21 * scan_sigma_et(cfg, e, cfg.sigma_scan.front());
            const double G1 = e.omega21 * scan_sigma_et(cfg, e, cfg.sigma_scan.back());
            s["analytic_decay_ratio_expected"] = std::exp(G1 * G1 - G0 * G0);
        }
        s["p2_point_limit"] = e.g * e.g;
    }

    // (b) superposition (|1> + 2i|2>)/sqrt(5): increment vs packet size
    const auto sup_amp = analytic::make_state({1.0, 0.0}, {0.0, 2.0});
    const auto sup_rho = quantum::TlsDensityMatrix::pure(sup_amp.C1, sup_amp.C2);
    const double p2_init = std::norm(sup_amp.C2);
    const std::vector<double> decay_scan = {0.02, 0.05, 0.10};
    {
        std::vector<std::vector<double>> rows;
        for (double sb : decay_scan) {
            const double sigma_et = sb * e.T21;
            double dp_a = kNan, dp_q = kNan;
            if (do_a) {
                const auto inc = analytic::single_increment(sup_amp, 0.0,
                                                            gaussian_qew(sigma_et), e.ctx);
                const auto rep = analytic::post_probability(sup_amp, inc);
                dp_a = rep.p_post - rep.p_prev;
            }
            if (do_q) {
                wavepacket::QewSpec qew = cfg.make_qew(0.0, cfg.phi_0);
                qew.sigma_et = sigma_et;
                const auto res = quantum::run_single(qew, sup_rho, e.geom, cfg.tls, e.kin,
                                                     single_options(cfg, 0));
                dp_q = res.p2 - p2_init;
            }
            rows.push_back({sb, dp_q, dp_a});
        }
        w.csv("fig3b_superposition.csv", {"sigma_over_T21", "dP2_quantum", "dP2_analytic"},
              rows);
    }

    // (b) arrival-time phase law at sigma_bar = 0.05
    {
        const double sb = 0.05;
        const double sigma_et = sb * e.T21;
        std::vector<std::vector<double>> rows;
        double a_min = kNan, a_max = kNan, worst = 0.0;
        for (int k = 0; k < 8; ++k) {
            const double t0 = k * e.T21 / 8.0;
            double dp_a = kNan, dp_q = kNan;
            if (do_a) {
                const auto inc = analytic::single_increment(sup_amp, t0,
                                                            gaussian_qew(sigma_et), e.ctx);
                const auto rep = analytic::post_probability(sup_amp, inc);
                dp_a = rep.p_post - rep.p_prev;
                a_min = std::isnan(a_min) ? dp_a : std::min(a_min, dp_a);
                a_max = std::isnan(a_max) ? dp_a : std::max(a_max, dp_a);
            }
            if (do_q) {
                wavepacket::QewSpec qew = cfg.make_qew(t0, cfg.phi_0);
                qew.sigma_et = sigma_et;
                const auto res = quantum::run_single(qew, sup_rho, e.geom, cfg.tls, e.kin,
                                                     single_options(cfg, 0));
                dp_q = res.p2 - p2_init;
            }
            if (do_a && do_q) worst = std::max(worst, std::abs(dp_q - dp_a));
            rows.push_back({t0, dp_q, dp_a});
        }
        w.csv("fig3b_phase.csv", {"t0_fs", "dP2_quantum", "dP2_analytic"}, rows);

        json phase;
        phase["sigma_over_T21"] = sb;
        if (do_a) phase["amplitude_analytic"] = (a_max - a_min) / 2.0;
        if (do_a && do_q) {
            phase["max_abs_model_difference"] = worst;
            const double amp = (a_max - a_min) / 2.0;
            sanity.push_back(sanity_entry(
                "superposition phase law matches between models", worst < 0.10 * amp,
                worst, "< 10% of the oscillation amplitude"));
        }
        s["phase_scan"] = phase;
    }

    s["sanity"] = sanity;
    return s;
}

json run_fig4(const ScenarioConfig& cfg, const Engine& e, Writer& w) {
    if (!cfg.has_train) fail("fig4_point_train: a train block is required");
    const bool do_q = cfg.model != Model::analytic;
    const bool do_a = cfg.model != Model::quantum;
    const int N = cfg.train.n_electrons;
    const auto ground_rho = quantum::TlsDensityMatrix::ground();

    // The figure is the comparison of the two arrival laws, so both are run
    // regardless of the configured law.
    analytic::TrainSpec spec_in = cfg.resolved_train();
    spec_in.arrival_law = analytic::TrainSpec::ArrivalLaw::in_phase;
    spec_in.phase_law = analytic::TrainSpec::PhaseLaw::common_phi0;

    std::vector<double> a_in(N, kNan), q_in(N, kNan);
    std::vector<double> a_rnd_mean(N, kNan), q_rnd_mean(N, kNan), q_rnd_std(N, kNan);

    if (do_a) {
        for (int k = 1; k <= N; ++k) {
            analytic::TrainSpec spec_k = spec_in; // counter RNG: prefix draws match
            spec_k.n_electrons = k;
            a_in[k - 1] = analytic::train_point_amplitude(spec_k, e.ctx, cfg.beam.sigma_et).p2;
        }
    }

    const wavepacket::QewSpec qew_t = cfg.make_qew(0.0, 0.0);
    std::optional<quantum::InteractionChannel> channel;
    quantum::TrainOptions topts;
    topts.grid.max_points = cfg.max_points;
    if (do_q) {
        if (cfg.train_method == "channel") {
            topts.method = quantum::TrainMethod::channel;
            channel.emplace(quantum::build_interaction_channel(
                qew_t, e.geom, cfg.tls, e.kin, single_options(cfg, 0)));
            topts.channel = &*channel;
        } else {
            topts.method = quantum::TrainMethod::direct;
        }
        const auto records =
            quantum::run_train(spec_in, qew_t, ground_rho, e.geom, cfg.tls, e.kin, topts);
        for (int k = 0; k < N; ++k) q_in[k] = records[k].p2;
    }

    // uniform-random arrival ensemble: member s runs with seed cfg.seed + s
    std::vector<std::vector<double>> a_rnd(N), q_rnd(N);
    for (int s_idx = 0; s_idx < cfg.n_seeds; ++s_idx) {
        analytic::TrainSpec spec_r = cfg.resolved_train(static_cast<std::uint64_t>(s_idx));
        spec_r.arrival_law = analytic::TrainSpec::ArrivalLaw::uniform_random;
        spec_r.phase_law = analytic::TrainSpec::PhaseLaw::common_phi0;
        if (do_a) {
            for (int k = 1; k <= N; ++k) {
                analytic::TrainSpec spec_k = spec_r;
                spec_k.n_electrons = k;
                a_rnd[k - 1].push_back(
                    analytic::train_point_amplitude(spec_k, e.ctx, cfg.beam.sigma_et).p2);
            }
        }
        if (do_q) {
            const auto records = quantum::run_train(spec_r, qew_t, ground_rho, e.geom,
                                                    cfg.tls, e.kin, topts);
            for (int k = 0; k < N; ++k) q_rnd[k].push_back(records[k].p2);
        }
    }
    for (int k = 0; k < N; ++k) {
        if (do_a && !a_rnd[k].empty())
            a_rnd_mean[k] = std::accumulate(a_rnd[k].begin(), a_rnd[k].end(), 0.0) /
                            static_cast<double>(a_rnd[k].size());
        if (do_q && !q_rnd[k].empty()) {
            q_rnd_mean[k] = std::accumulate(q_rnd[k].begin(), q_rnd[k].end(), 0.0) /
                            static_cast<double>(q_rnd[k].size());
            q_rnd_std[k] = sample_std(q_rnd[k], q_rnd_mean[k]);
        }
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> ns;
    for (int k = 0; k < N; ++k) {
        ns.push_back(k + 1.0);
        rows.push_back({k + 1.0, a_in[k], q_in[k], a_rnd_mean[k], q_rnd_mean[k], q_rnd_std[k]});
    }
    w.csv("fig4_train.csv",
          {"n_electrons", "P2_analytic_in_phase", "P2_quantum_in_phase",
           "P2_random_mean_analytic", "P2_random_mean_quantum", "P2_random_std_quantum"},
          rows);

    json s;
    json sanity = json::array();
    s["n_seeds"] = cfg.n_seeds;
    if (do_a && N >= 2) {
        const double ratio = a_in[N - 1] / a_in[0];
        const double expected = static_cast<double>(N) * N;
        s["in_phase_ratio_analytic"] = ratio;
        sanity.push_back(sanity_entry("analytic in-phase ratio P2(N)/P2(1) = N^2",
                                      std::abs(ratio / expected - 1.0) < 1e-9, ratio,
                                      "= " + g17(expected) + " exactly"));
    }
    if (do_q && N >= 3) {
        const auto fitq = fit::fit_power_law(ns, q_in);
        s["in_phase_fit_quantum"] = {{"a", fitq.a}, {"b", fitq.b},
                                     {"r_squared", fitq.r_squared}};
        sanity.push_back(sanity_entry("quantum in-phase build-up is quadratic",
                                      std::abs(fitq.b - 2.0) < 0.05, fitq.b,
                                      "exponent within 2.0 +- 0.05"));
        const auto fitr = fit::fit_polynomial(ns, q_rnd_mean, 2);
        s["random_quadratic_quantum"] = {{"c2", fitr.coeff[2]},
                                         {"c2_std_error", fitr.std_error[2]}};
        const auto fitl = fit::fit_polynomial(ns, q_rnd_mean, 1);
        s["random_linear_fit_quantum"] = {{"intercept", fitl.coeff[0]},
                                          {"slope", fitl.coeff[1]},
                                          {"r_squared", fitl.r_squared}};
        if (cfg.n_seeds >= 2)
            sanity.push_back(sanity_entry(
                "quantum random-arrival mean grows linearly",
                std::abs(fitr.coeff[2]) <= 2.0 * fitr.std_error[2], fitr.coeff[2],
                "quadratic coefficient consistent with 0 at 2 sigma"));
    }
    if (do_a) {
        // cross-check: E[P2] of a long random train equals the in-phase
        // build-up of sqrt(N) electrons; 400 seeds shrink the ensemble error
        // of the mean to ~5%.
        const int n_long = N * N;
        const int n_seeds_long = std::max(400, cfg.n_seeds);
        double mean400 = 0.0;
        for (int s_idx = 0; s_idx < n_seeds_long; ++s_idx) {
            analytic::TrainSpec spec_l = cfg.resolved_train(static_cast<std::uint64_t>(s_idx));
            spec_l.arrival_law = analytic::TrainSpec::ArrivalLaw::uniform_random;
            spec_l.phase_law = analytic::TrainSpec::PhaseLaw::common_phi0;
            spec_l.n_electrons = n_long;
            mean400 += analytic::train_point_amplitude(spec_l, e.ctx, cfg.beam.sigma_et).p2;
        }
        mean400 /= n_seeds_long;
        s["random_mean_p2_long_train"] = {{"n_electrons", n_long},
                                          {"n_seeds", n_seeds_long},
                                          {"mean_p2", mean400}};
        if (N >= 1 && do_a) {
            const double ref = a_in[N - 1];
            s["random_long_vs_in_phase_ratio"] = mean400 / ref;
            sanity.push_back(sanity_entry(
                "mean random P2(N^2) matches in-phase P2(N)",
                std::abs(mean400 / ref - 1.0) < 0.15, mean400 / ref,
                "ratio within 1 +- 0.15"));
        }
    }
    s["sanity"] = sanity;
    return s;
}

json run_fig5(const ScenarioConfig& cfg, const Engine& e, Writer& w) {
    if (cfg.model == Model::analytic)
        fail("fig5_single_modulated requires the quantum model");
    if (!cfg.modulated)
        fail("fig5_single_modulated requires modulation.enabled = true");

    struct State {
        const char* name;
        analytic::TlsAmplitudes amp;
    };
    const double th = 3.0 * std::numbers::pi / 8.0;
    const std::vector<State> states = {
        {"ground", analytic::make_state({1.0, 0.0}, {0.0, 0.0})},
        {"superposition", analytic::make_state({std::sin(th), 0.0}, {std::cos(th), 0.0})},
    };

    json s;
    json sanity = json::array();
    const double gamma_env = e.omega21 * cfg.beam.sigma_et;

    for (const auto& st : states) {
        const auto rho0 = quantum::TlsDensityMatrix::pure(st.amp.C1, st.amp.C2);
        const double p2_init = std::norm(st.amp.C2);

        wavepacket::QewSpec q_mod = cfg.make_qew(cfg.t0, cfg.phi_0);
        wavepacket::QewSpec q_unmod = q_mod;
        q_unmod.kind = wavepacket::QewSpec::Kind::gaussian;
        q_unmod.g_L = 0.0;
        q_unmod.omega_b = 0.0;
        q_unmod.phi_0 = 0.0;

        const auto res_u = quantum::run_single(
            q_unmod, rho0, e.geom, cfg.tls, e.kin,
            single_options(cfg, static_cast<std::size_t>(cfg.trajectory_samples)));
        const auto res_m = quantum::run_single(
            q_mod, rho0, e.geom, cfg.tls, e.kin,
            single_options(cfg, static_cast<std::size_t>(cfg.trajectory_samples)));

        const double t_lo = std::min(res_u.t_start, res_m.t_start);
        const double t_hi = std::max(res_u.t_end, res_m.t_end);
        const int nrow = std::max(2, cfg.trajectory_samples + 1);
        std::vector<std::vector<double>> rows(nrow);
        for (int i = 0; i < nrow; ++i) {
            const double t = t_lo + (t_hi - t_lo) * i / (nrow - 1);
            rows[i] = {t, interp_p2(res_u.trajectory, t), interp_p2(res_m.trajectory, t)};
        }
        w.csv(std::string("fig5_") + st.name + ".csv",
              {"t_fs", "P2_unmodulated", "P2_modulated"}, rows);

        json block;
        block["p2_initial"] = p2_init;
        block["p2_final_unmodulated"] = res_u.p2;
        block["p2_final_modulated"] = res_m.p2;
        block["dp2_unmodulated"] = res_u.p2 - p2_init;
        block["dp2_modulated"] = res_m.p2 - p2_init;
        block["norm_error_unmodulated"] = res_u.norm_error;
        block["norm_error_modulated"] = res_m.norm_error;
        block["n_z_modulated"] = res_m.n_z;
        block["n_steps_modulated"] = res_m.n_steps;

        if (std::string(st.name) == "ground") {
            const double ratio = res_m.p2 / res_u.p2;
            block["modulated_over_unmodulated"] = ratio;
            sanity.push_back(sanity_entry(
                "ground-state P2 unchanged by modulation", std::abs(ratio - 1.0) < 0.05,
                ratio, "within 1 +- 0.05"));
        } else {
            const double ratio =
                std::abs(res_m.p2 - p2_init) / std::abs(res_u.p2 - p2_init);
            block["abs_dp2_ratio_modulated_over_unmodulated"] = ratio;
            block["first_order_revival_bound"] = std::exp(gamma_env * gamma_env / 2.0);
        }
        s[st.name] = block;
    }

    // microbunch arrival times from the packet's density at the TLS
    {
        wavepacket::QewSpec q_mod = cfg.make_qew(cfg.t0, cfg.phi_0);
        const int m_max = wavepacket::sideband_cutoff(cfg.g_L);
        const auto amps = wavepacket::pinem_amplitudes(q_mod, e.kin, m_max);
        const double sig_t = wavepacket::drifted_sigma_t(q_mod, e.kin);
        const double t_b = 2.0 * std::numbers::pi / q_mod.omega_b;
        const double t_lo = cfg.t0 - 3.0 * sig_t, t_hi = cfg.t0 + 3.0 * sig_t;
        const int nt = static_cast<int>(std::ceil((t_hi - t_lo) / (t_b / 64.0)));
        std::vector<double> tg(nt);
        for (int i = 0; i < nt; ++i) tg[i] = t_lo + (t_hi - t_lo) * i / (nt - 1);
        const auto dens = wavepacket::density_time_series(amps, tg);
        const double peak = *std::max_element(dens.begin(), dens.end());
        json arrivals = json::array();
        for (int i = 1; i + 1 < nt; ++i)
            if (dens[i] > dens[i - 1] && dens[i] >= dens[i + 1] && dens[i] >= 0.25 * peak)
                arrivals.push_back(tg[i]);
        s["microbunch_arrivals_fs"] = arrivals;
        s["modulation_period_fs"] = t_b;
    }

    s["sanity"] = sanity;
    return s;
}

json run_fig6(const ScenarioConfig& cfg, const Engine& e, Writer& w) {
    if (cfg.model == Model::analytic)
        fail("fig6_correlated_train requires the quantum model");
    if (!cfg.modulated)
        fail("fig6_correlated_train requires modulation.enabled = true");
    if (!cfg.has_train) fail("fig6_correlated_train: a train block is required");

    const int N = cfg.train.n_electrons;
    const auto ground_rho = quantum::TlsDensityMatrix::ground();
    const wavepacket::QewSpec qew_t = cfg.make_qew(0.0, 0.0);

    // The channel factorization pays the modulated basis evolutions once for
    // the whole ensemble; "direct" is the brute-force cross-check knob.
    std::optional<quantum::InteractionChannel> channel;
    quantum::TrainOptions topts;
    topts.grid.max_points = cfg.max_points;
    if (cfg.train_method == "channel") {
        topts.method = quantum::TrainMethod::channel;
        channel.emplace(quantum::build_interaction_channel(qew_t, e.geom, cfg.tls, e.kin,
                                                           single_options(cfg, 0)));
        topts.channel = &*channel;
    } else {
        topts.method = quantum::TrainMethod::direct;
    }

    // correlated train: common modulation phase, arrivals as configured
    analytic::TrainSpec spec_b = cfg.resolved_train();
    std::vector<double> p2_corr(N);
    {
        const auto records =
            quantum::run_train(spec_b, qew_t, ground_rho, e.geom, cfg.tls, e.kin, topts);
        for (int k = 0; k < N; ++k) p2_corr[k] = records[k].p2;
    }

    // random-modulation-phase ensemble
    std::vector<std::vector<double>> rnd(N);
    for (int s_idx = 0; s_idx < cfg.n_seeds; ++s_idx) {
        analytic::TrainSpec spec_r = cfg.resolved_train(static_cast<std::uint64_t>(s_idx));
        spec_r.phase_law = analytic::TrainSpec::PhaseLaw::random_phi0;
        const auto records =
            quantum::run_train(spec_r, qew_t, ground_rho, e.geom, cfg.tls, e.kin, topts);
        for (int k = 0; k < N; ++k) rnd[k].push_back(records[k].p2);
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> ns, rnd_mean(N);
    for (int k = 0; k < N; ++k) {
        const double mean = std::accumulate(rnd[k].begin(), rnd[k].end(), 0.0) /
                            static_cast<double>(rnd[k].size());
        rnd_mean[k] = mean;
        ns.push_back(k + 1.0);
        rows.push_back({k + 1.0, p2_corr[k], mean, sample_std(rnd[k], mean)});
    }
    w.csv("fig6_correlated_train.csv",
          {"electron_index", "P2_correlated", "P2_random_phase_mean", "P2_random_phase_std"},
          rows);

    json s;
    json sanity = json::array();
    s["n_seeds"] = cfg.n_seeds;
    s["train_method"] = cfg.train_method;
    if (channel)
        s["channel"] = {{"n_phi", channel->n_phi()},
                        {"degree", channel->degree()},
                        {"n_z", channel->n_z()},
                        {"n_steps", channel->n_steps()},
                        {"dt_fs", channel->dt()}};

    if (N >= 3) {
        const auto fitp = fit::fit_power_law(ns, p2_corr);
        s["correlated_power_fit"] = {{"a", fitp.a}, {"b", fitp.b},
                                     {"r_squared", fitp.r_squared}};
        sanity.push_back(sanity_entry("correlated build-up close to quadratic",
                                      std::abs(fitp.b - 2.0) < 0.15 && fitp.r_squared > 0.99,
                                      fitp.b, "exponent 2.0 +- 0.15, R^2 > 0.99"));
        const auto fitr = fit::fit_polynomial(ns, rnd_mean, 2);
        s["random_quadratic"] = {{"c2", fitr.coeff[2]}, {"c2_std_error", fitr.std_error[2]}};
        const auto fitl = fit::fit_polynomial(ns, rnd_mean, 1);
        s["random_linear_fit"] = {{"intercept", fitl.coeff[0]},
                                  {"slope", fitl.coeff[1]},
                                  {"r_squared", fitl.r_squared}};
        if (cfg.n_seeds >= 2)
            sanity.push_back(sanity_entry(
                "random-phase mean grows linearly",
                std::abs(fitr.coeff[2]) <= 2.0 * fitr.std_error[2], fitr.coeff[2],
                "quadratic coefficient consistent with 0 at 2 sigma"));
    }

    // analytic comparison (resonant-harmonic law)
    {
        const auto spectrum = config_spectrum(cfg, e);
        const int h = cfg.train.harmonic;
        const double f_abs = std::abs(spectrum.harmonic(h));
        const double coeff = e.g * e.g * f_abs * f_abs;
        json a;
        a["f_harmonic_abs"] = f_abs;
        a["p2_quadratic_coefficient"] = coeff;
        a["p2_at_n"] = coeff * N * N;
        analytic::TrainSpec spec_a = spec_b;
        a["correlated_train_probability"] =
            analytic::correlated_train_probability(spec_a, spectrum, cfg.beam.sigma_et, e.ctx)
                .p2;
        s["analytic"] = a;
    }

    s["sanity"] = sanity;
    return s;
}

json run_custom(const ScenarioConfig& cfg, const Engine& e, Writer& w) {
    const bool do_q = cfg.model != Model::analytic;
    const bool do_a = cfg.model != Model::quantum;
    const auto amp0 = analytic::make_state(cfg.c1, cfg.c2);
    const auto rho0 = quantum::TlsDensityMatrix::pure(amp0.C1, amp0.C2);
    const double p2_init = std::norm(amp0.C2);

    json s;
    json sanity = json::array();
    s["p2_initial"] = p2_init;
    std::vector<double> final_p2s;

    if (!cfg.has_train) {
        const wavepacket::QewSpec qew = cfg.make_qew(cfg.t0, cfg.phi_0);
        if (do_a) {
            std::vector<std::string> warnings;
            analytic::TransitionReport rep;
            if (cfg.modulated) {
                const auto spectrum = config_spectrum(cfg, e);
                const double t_L = cfg.t0 + cfg.phi_0 / qew.omega_b;
                rep = analytic::modulated_increment(amp0, spectrum, cfg.t0, t_L,
                                                    cfg.beam.sigma_et, e.ctx, &warnings);
            } else {
                const auto inc = analytic::single_increment(amp0, cfg.t0, qew, e.ctx);
                rep = analytic::post_probability(amp0, inc);
            }
            s["analytic"] = {{"dp1", rep.dp1},
                             {"dp2", rep.dp2},
                             {"p2_after", rep.p_post},
                             {"warnings", warnings}};
            final_p2s.push_back(rep.p_post);
        }
        if (do_q) {
            const auto res = quantum::run_single(
                qew, rho0, e.geom, cfg.tls, e.kin,
                single_options(cfg, static_cast<std::size_t>(cfg.trajectory_samples)));
            if (cfg.trajectory_samples > 0) {
                std::vector<std::vector<double>> rows;
                for (const auto& smp : res.trajectory) rows.push_back({smp.t, smp.p2});
                w.csv("custom_quantum.csv", {"t_fs", "P2"}, rows);
            }
            const auto& r = res.rho_after;
            s["quantum"] = {{"p2_after", res.p2},
                            {"dp2", res.p2 - p2_init},
                            {"norm_error", res.norm_error},
                            {"max_edge_mass", res.max_edge_mass},
                            {"n_z", res.n_z},
                            {"n_steps", res.n_steps},
                            {"dt_fs", res.dt},
                            {"rho_after",
                             {{"rho11", r(0, 0).real()},
                              {"rho22", r(1, 1).real()},
                              {"rho12_re", r(0, 1).real()},
                              {"rho12_im", r(0, 1).imag()}}}};
            final_p2s.push_back(res.p2);
        }
        if (do_a && do_q) {
            const double dq = s["quantum"]["dp2"].get<double>();
            const double da = s["analytic"]["p2_after"].get<double>() - p2_init;
            const double denom = std::max(std::abs(dq), std::abs(da));
            s["model_delta"] = {{"dp2_quantum", dq},
                                {"dp2_analytic", da},
                                {"relative_difference",
                                 denom > 0.0 ? std::abs(dq - da) / denom : 0.0}};
        }
    } else {
        const analytic::TrainSpec spec = cfg.resolved_train();
        const int N = spec.n_electrons;
        std::vector<double> q_p2(N, kNan), a_p2(N, kNan);
        std::vector<double> arrivals = analytic::draw_arrivals(spec);
        std::vector<double> phases = analytic::draw_phases(spec);

        if (do_a) {
            std::optional<wavepacket::ModulationSpectrum> spectrum;
            if (cfg.modulated) spectrum = config_spectrum(cfg, e);
            for (int k = 1; k <= N; ++k) {
                analytic::TrainSpec spec_k = spec; // prefix draws match the full train
                spec_k.n_electrons = k;
                a_p2[k - 1] =
                    cfg.modulated
                        ? analytic::correlated_train_probability(spec_k, *spectrum,
                                                                 cfg.beam.sigma_et, e.ctx)
                              .p2
                        : analytic::train_point_amplitude(spec_k, e.ctx, cfg.beam.sigma_et)
                              .p2;
            }
        }
        if (do_q) {
            const wavepacket::QewSpec qew_t = cfg.make_qew(0.0, 0.0);
            quantum::TrainOptions topts;
            topts.grid.max_points = cfg.max_points;
            std::optional<quantum::InteractionChannel> channel;
            if (cfg.train_method == "channel") {
                topts.method = quantum::TrainMethod::channel;
                channel.emplace(quantum::build_interaction_channel(
                    qew_t, e.geom, cfg.tls, e.kin, single_options(cfg, 0)));
                topts.channel = &*channel;
            } else {
                topts.method = quantum::TrainMethod::direct;
            }
            const auto records =
                quantum::run_train(spec, qew_t, rho0, e.geom, cfg.tls, e.kin, topts);
            for (int k = 0; k < N; ++k) q_p2[k] = records[k].p2;
            s["quantum"] = {{"method", cfg.train_method}, {"p2_after", q_p2[N - 1]}};
            final_p2s.push_back(q_p2[N - 1]);
        }
        if (do_a) {
            s["analytic"] = {{"p2_after", a_p2[N - 1]}};
            final_p2s.push_back(a_p2[N - 1]);
        }

        std::vector<std::vector<double>> rows;
        for (int k = 0; k < N; ++k)
            rows.push_back({k + 1.0, arrivals[k], phases[k], q_p2[k], a_p2[k]});
        w.csv("custom_train.csv",
              {"electron_index", "t0_fs", "phi0_rad", "P2_quantum", "P2_analytic"}, rows);
    }

    if (cfg.tls.dipole_debye == 0.0) {
        double worst = 0.0;
        for (double p : final_p2s) worst = std::max(worst, std::abs(p - p2_init));
        sanity.push_back(sanity_entry("zero dipole leaves P2 at its initial value",
                                      worst < 1e-12, worst, "< 1e-12"));
    }
    s["sanity"] = sanity;
    return s;
}

// ---------------------------------------------------------------------------
// manifest
// ---------------------------------------------------------------------------

json make_manifest(const ScenarioConfig& cfg, const Engine& e, const json& files,
                   const json* annotation) {
    json m;
    m["schema_version"] = 1;
    m["generator"] = {{"name", "feberi"}, {"version", kVersion}};
    m["scenario"] = to_string(cfg.kind);
    m["model"] = to_string(cfg.model);
    m["seed"] = cfg.seed;
    m["config"] = config_to_json(cfg);
    m["constants"] = {{"hbar_eV_fs", hbar},
                      {"c_nm_per_fs", c_light},
                      {"electron_rest_energy_eV", electron_rest_energy},
                      {"electron_mass_eV_fs2_per_nm2", electron_mass},
                      {"debye_e_nm", debye_to_e_nm},
                      {"coulomb_e2_eV_nm", coulomb_e2}};

    const double sigma_bar = cfg.beam.sigma_et / e.T21;
    json d;
    d["gamma0"] = e.kin.gamma0;
    d["beta0"] = e.kin.beta0;
    d["v0_nm_per_fs"] = e.kin.v0;
    d["p0_eV_fs_per_nm"] = e.kin.p0;
    d["t_r_fs"] = e.kin.t_r;
    d["omega21_rad_per_fs"] = e.omega21;
    d["T21_fs"] = e.T21;
    d["sigma_bar_et"] = sigma_bar;
    d["Gamma"] = e.omega21 * cfg.beam.sigma_et;
    d["coupling_g"] = e.g;
    d["coupling_g_squared"] = e.g * e.g;
    d["kernel_scale_eV"] = coupling::kernel_prefactor(e.geom, cfg.tls);
    d["truncation_radius_nm"] = coupling::truncation_radius(e.geom, e.kin);
    if (cfg.modulated) {
        wavepacket::QewSpec qew = cfg.make_qew(cfg.t0, cfg.phi_0);
        d["modulation"] = {
            {"omega_b_rad_per_fs", qew.omega_b},
            {"sideband_spacing_eV_fs_per_nm", wavepacket::sideband_spacing(qew, e.kin)},
            {"m_max", wavepacket::sideband_cutoff(cfg.g_L)},
            {"dispersion_phase_rad", wavepacket::dispersion_phase(qew, e.kin)},
            {"drifted_sigma_t_fs", wavepacket::drifted_sigma_t(qew, e.kin)}};
    }
    m["derived"] = d;
    m["rng"] = {{"seed", cfg.seed},
                {"arrival_stream", 0},
                {"phase_stream", 1},
                {"ensemble_seed_rule", "seed + member_index"}};
    m["files"] = files;
    if (annotation) m["sweep_point"] = *annotation;
    return m;
}

} // namespace

// ---------------------------------------------------------------------------
// enum <-> string
// ---------------------------------------------------------------------------

std::string to_string(Kind kind) {
    switch (kind) {
    case Kind::fig2_kernel: return "fig2_kernel";
    case Kind::fig3_size_scan: return "fig3_size_scan";
    case Kind::fig4_point_train: return "fig4_point_train";
    case Kind::fig5_single_modulated: return "fig5_single_modulated";
    case Kind::fig6_correlated_train: return "fig6_correlated_train";
    case Kind::custom: return "custom";
    }
    return "?";
}

std::string to_string(Model model) {
    switch (model) {
    case Model::analytic: return "analytic";
    case Model::quantum: return "quantum";
    case Model::both: return "both";
    }
    return "?";
}

Kind kind_from_string(const std::string& name) {
    if (name == "fig2_kernel") return Kind::fig2_kernel;
    if (name == "fig3_size_scan") return Kind::fig3_size_scan;
    if (name == "fig4_point_train") return Kind::fig4_point_train;
    if (name == "fig5_single_modulated") return Kind::fig5_single_modulated;
    if (name == "fig6_correlated_train") return Kind::fig6_correlated_train;
    if (name == "custom") return Kind::custom;
    fail("config: unknown scenario \"" + name + "\"");
}

Model model_from_string(const std::string& name) {
    if (name == "analytic") return Model::analytic;
    if (name == "quantum") return Model::quantum;
    if (name == "both") return Model::both;
    fail("config: unknown model \"" + name + "\" (expected analytic, quantum or both)");
}

// ---------------------------------------------------------------------------
// ScenarioConfig
// ---------------------------------------------------------------------------

double ScenarioConfig::omega_b_resolved() const {
    return (modulated && omega_b > 0.0) ? omega_b : tls.omega21();
}

wavepacket::QewSpec ScenarioConfig::make_qew(double arrival, double phase0) const {
    wavepacket::QewSpec q;
    q.kind = modulated ? wavepacket::QewSpec::Kind::pinem_modulated
                       : wavepacket::QewSpec::Kind::gaussian;
    q.sigma_et = beam.sigma_et;
    q.g_L = modulated ? std::complex<double>(g_L, 0.0) : std::complex<double>(0.0, 0.0);
    q.omega_b = modulated ? omega_b_resolved() : 0.0;
    q.phi_0 = modulated ? phase0 : 0.0;
    q.t0 = arrival;
    q.L_d = beam.drift_length;
    return q;
}

analytic::TrainSpec ScenarioConfig::resolved_train(std::uint64_t seed_offset) const {
    analytic::TrainSpec t = train;
    if (t.omega_b <= 0.0) t.omega_b = omega_b_resolved();
    t.seed = seed + seed_offset;
    return t;
}

void ScenarioConfig::validate() const {
    if (!seed_set)
        fail("config: a run seed is required; set \"seed\" in the config or pass --seed");
    beam.validate();
    tls.validate();
    if (modulated) {
        if (!(g_L > 0.0)) fail("config: modulation.g_L must be > 0 when enabled");
        if (omega_b < 0.0) fail("config: modulation.omega_b must be >= 0");
    }
    if (std::norm(c1) + std::norm(c2) <= 0.0)
        fail("config: initial_state must not be the zero vector");
    if (n_seeds < 1) fail("config: ensemble_seeds must be >= 1");
    if (trajectory_samples < 0) fail("config: trajectory_samples must be >= 0");
    if (max_points < 4096) fail("config: grid.max_points must be >= 4096");
    for (double sb : sigma_scan)
        if (!(sb > 0.0)) fail("config: scan.sigma_over_T21 entries must be > 0");
    if ((kind == Kind::fig2_kernel || kind == Kind::fig3_size_scan) && sigma_scan.empty())
        fail("config: scan.sigma_over_T21 must not be empty");
    if (train_method != "channel" && train_method != "direct")
        fail("config: train.method must be \"channel\" or \"direct\"");
    if (has_train) resolved_train().validate();
    if (outdir.empty()) fail("config: output directory must not be empty");
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

ScenarioConfig preset(Kind kind) {
    ScenarioConfig cfg;
    cfg.kind = kind;
    cfg.outdir = "out/" + to_string(kind);

    cfg.beam.kinetic_energy = 200.0e3;
    cfg.beam.r_perp0 = 2.0;
    cfg.beam.drift_length = 0.0;
    cfg.tls.transition_energy = 2.0;
    cfg.tls.dipole_debye = 5.0;
    cfg.tls.orientation = physical::TlsSpec::Orientation::perpendicular;
    const double T21 = cfg.tls.period21();
    cfg.beam.sigma_et = T21;

    switch (kind) {
    case Kind::fig2_kernel:
        cfg.model = Model::analytic;
        cfg.sigma_scan = {0.5, 1.0, 2.0};
        cfg.scan_transit_units = true;
        break;
    case Kind::fig3_size_scan:
        cfg.sigma_scan = {0.25, 0.5, 1.0, 2.0};
        break;
    case Kind::fig4_point_train:
        cfg.beam.sigma_et = 0.05 * T21;
        cfg.has_train = true;
        cfg.train.n_electrons = 20;
        cfg.train.arrival_law = analytic::TrainSpec::ArrivalLaw::in_phase;
        cfg.train.phase_law = analytic::TrainSpec::PhaseLaw::common_phi0;
        cfg.train.harmonic = 1;
        break;
    case Kind::fig5_single_modulated:
        cfg.modulated = true;
        cfg.g_L = 0.75;
        cfg.beam.drift_length = optimal_drift_length(cfg.beam, cfg.tls);
        break;
    case Kind::fig6_correlated_train:
        cfg.modulated = true;
        cfg.g_L = 0.75;
        cfg.beam.drift_length = optimal_drift_length(cfg.beam, cfg.tls);
        cfg.model = Model::quantum;
        cfg.has_train = true;
        cfg.train.n_electrons = 20;
        cfg.train.arrival_law = analytic::TrainSpec::ArrivalLaw::uniform_random;
        cfg.train.phase_law = analytic::TrainSpec::PhaseLaw::common_phi0;
        cfg.train.harmonic = 1;
        cfg.train_method = "channel";
        break;
    default:
        break;
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// JSON <-> config
// ---------------------------------------------------------------------------

namespace {

void apply_json(ScenarioConfig& cfg, const json& j) {
    check_keys(j, "",
               {"scenario", "model", "seed", "output", "beam", "tls", "modulation",
                "initial_state", "arrival_time", "train", "scan", "ensemble_seeds",
                "trajectory_samples", "grid", "sweep"});

    if (j.contains("model"))
        cfg.model = model_from_string(string_field(j["model"], "model"));
    if (j.contains("seed")) {
        const json& v = j["seed"];
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                       v.get<std::int64_t>() < 0))
            fail("config: seed must be a non-negative integer");
        cfg.seed = v.get<std::uint64_t>();
        cfg.seed_set = true;
    }
    if (j.contains("output")) cfg.outdir = string_field(j["output"], "output");

    if (j.contains("tls")) {
        const json& t = j["tls"];
        check_keys(t, "tls", {"transition_energy", "dipole_moment", "orientation"});
        if (t.contains("transition_energy"))
            cfg.tls.transition_energy =
                quantity_field(t["transition_energy"], "tls.transition_energy",
                               Dimension::energy);
        if (t.contains("dipole_moment"))
            cfg.tls.dipole_debye =
                quantity_field(t["dipole_moment"], "tls.dipole_moment", Dimension::dipole);
        if (t.contains("orientation"))
            cfg.tls.orientation = orientation_from(
                string_field(t["orientation"], "tls.orientation"), "tls.orientation");
    }

    if (j.contains("modulation")) {
        const json& mjs = j["modulation"];
        check_keys(mjs, "modulation", {"enabled", "g_L", "omega_b", "phi_0"});
        if (mjs.contains("enabled"))
            cfg.modulated = bool_field(mjs["enabled"], "modulation.enabled");
        if (mjs.contains("g_L")) cfg.g_L = number_field(mjs["g_L"], "modulation.g_L");
        if (mjs.contains("omega_b")) {
            const json& v = mjs["omega_b"];
            if (v.is_string() && v.get<std::string>() == "auto")
                cfg.omega_b = 0.0;
            else
                cfg.omega_b =
                    quantity_field(v, "modulation.omega_b", Dimension::frequency);
        }
        if (mjs.contains("phi_0"))
            cfg.phi_0 = quantity_field(mjs["phi_0"], "modulation.phi_0", Dimension::angle);
    }

    if (j.contains("beam")) {
        const json& b = j["beam"];
        check_keys(b, "beam",
                   {"kinetic_energy", "impact_parameter", "sigma_et", "sigma_over_T21",
                    "drift_length"});
        if (b.contains("kinetic_energy"))
            cfg.beam.kinetic_energy =
                quantity_field(b["kinetic_energy"], "beam.kinetic_energy", Dimension::energy);
        if (b.contains("impact_parameter"))
            cfg.beam.r_perp0 =
                quantity_field(b["impact_parameter"], "beam.impact_parameter",
                               Dimension::length);
        if (b.contains("sigma_et") && b.contains("sigma_over_T21"))
            fail("config: set either beam.sigma_et or beam.sigma_over_T21, not both");
        if (b.contains("sigma_et"))
            cfg.beam.sigma_et =
                quantity_field(b["sigma_et"], "beam.sigma_et", Dimension::time);
        if (b.contains("sigma_over_T21")) {
            if (cfg.tls.transition_energy <= 0.0)
                fail("config: beam.sigma_over_T21 requires tls.transition_energy");
            cfg.beam.sigma_et =
                number_field(b["sigma_over_T21"], "beam.sigma_over_T21") *
                cfg.tls.period21();
        }
        if (b.contains("drift_length"))
            cfg.beam.drift_length =
                quantity_field(b["drift_length"], "beam.drift_length", Dimension::length);
    }

    if (j.contains("initial_state")) {
        const json& st = j["initial_state"];
        check_keys(st, "initial_state", {"c1", "c2"});
        if (st.contains("c1")) cfg.c1 = complex_field(st["c1"], "initial_state.c1");
        if (st.contains("c2")) cfg.c2 = complex_field(st["c2"], "initial_state.c2");
    }

    if (j.contains("arrival_time"))
        cfg.t0 = quantity_field(j["arrival_time"], "arrival_time", Dimension::time);

    if (j.contains("train")) {
        const json& t = j["train"];
        if (t.is_null()) {
            cfg.has_train = false;
        } else {
            check_keys(t, "train",
                       {"n_electrons", "arrival_law", "phase_law", "omega_b", "harmonic",
                        "t_00", "phi_0", "fixed_arrivals", "method"});
            cfg.has_train = true;
            if (t.contains("n_electrons"))
                cfg.train.n_electrons =
                    static_cast<int>(int_field(t["n_electrons"], "train.n_electrons"));
            if (t.contains("arrival_law"))
                cfg.train.arrival_law = arrival_law_from(
                    string_field(t["arrival_law"], "train.arrival_law"), "train.arrival_law");
            if (t.contains("phase_law"))
                cfg.train.phase_law = phase_law_from(
                    string_field(t["phase_law"], "train.phase_law"), "train.phase_law");
            if (t.contains("omega_b")) {
                const json& v = t["omega_b"];
                if (v.is_string() && v.get<std::string>() == "auto")
                    cfg.train.omega_b = 0.0;
                else
                    cfg.train.omega_b =
                        quantity_field(v, "train.omega_b", Dimension::frequency);
            }
            if (t.contains("harmonic"))
                cfg.train.harmonic =
                    static_cast<int>(int_field(t["harmonic"], "train.harmonic"));
            if (t.contains("t_00"))
                cfg.train.t_00 = quantity_field(t["t_00"], "train.t_00", Dimension::time);
            if (t.contains("phi_0"))
                cfg.train.phi_0 = quantity_field(t["phi_0"], "train.phi_0", Dimension::angle);
            if (t.contains("fixed_arrivals")) {
                const json& arr = t["fixed_arrivals"];
                if (!arr.is_array()) fail("config: train.fixed_arrivals must be an array");
                cfg.train.fixed_arrivals.clear();
                for (const auto& v : arr)
                    cfg.train.fixed_arrivals.push_back(
                        quantity_field(v, "train.fixed_arrivals[]", Dimension::time));
            }
            if (t.contains("method"))
                cfg.train_method = string_field(t["method"], "train.method");
        }
    }

    if (j.contains("scan")) {
        const json& sc = j["scan"];
        check_keys(sc, "scan", {"sigma_over_T21", "sigma_bar_et"});
        if (sc.contains("sigma_over_T21") && sc.contains("sigma_bar_et"))
            fail("config: set either scan.sigma_over_T21 or scan.sigma_bar_et, not both");
        const bool transit = sc.contains("sigma_bar_et");
        const std::string key = transit ? "sigma_bar_et" : "sigma_over_T21";
        if (sc.contains(key)) {
            const json& arr = sc[key];
            if (!arr.is_array() || arr.empty())
                fail("config: scan." + key + " must be a non-empty array");
            cfg.scan_transit_units = transit;
            cfg.sigma_scan.clear();
            for (const auto& v : arr)
                cfg.sigma_scan.push_back(number_field(v, "scan." + key + "[]"));
        }
    }

    if (j.contains("ensemble_seeds"))
        cfg.n_seeds = static_cast<int>(int_field(j["ensemble_seeds"], "ensemble_seeds"));
    if (j.contains("trajectory_samples"))
        cfg.trajectory_samples =
            static_cast<int>(int_field(j["trajectory_samples"], "trajectory_samples"));
    if (j.contains("grid")) {
        const json& gr = j["grid"];
        check_keys(gr, "grid", {"max_points"});
        if (gr.contains("max_points")) {
            const std::int64_t mp = int_field(gr["max_points"], "grid.max_points");
            if (mp <= 0) fail("config: grid.max_points must be positive");
            cfg.max_points = static_cast<std::size_t>(mp);
        }
    }
    // "sweep" is consumed by run_sweep.
}

} // namespace

ScenarioConfig config_from_json(const nlohmann::json& j, const std::string& kind_override) {
    if (!j.is_object()) fail("config: top level must be a JSON object");
    std::string name = kind_override;
    if (j.contains("scenario")) {
        const std::string s = string_field(j["scenario"], "scenario");
        if (!name.empty() && s != name)
            fail("config: scenario \"" + s + "\" conflicts with the " + name +
                 " subcommand");
        name = s;
    }
    if (name.empty()) fail("config: missing \"scenario\"");
    ScenarioConfig cfg = preset(kind_from_string(name));
    apply_json(cfg, j);
    return cfg;
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["scenario"] = to_string(cfg.kind);
    j["model"] = to_string(cfg.model);
    if (cfg.seed_set) j["seed"] = cfg.seed;
    j["output"] = cfg.outdir;
    j["beam"] = {{"kinetic_energy", quantity_string(cfg.beam.kinetic_energy, "eV")},
                 {"impact_parameter", quantity_string(cfg.beam.r_perp0, "nm")},
                 {"sigma_et", quantity_string(cfg.beam.sigma_et, "fs")},
                 {"drift_length", quantity_string(cfg.beam.drift_length, "nm")}};
    j["tls"] = {{"transition_energy", quantity_string(cfg.tls.transition_energy, "eV")},
                {"dipole_moment", quantity_string(cfg.tls.dipole_debye, "D")},
                {"orientation",
                 cfg.tls.orientation == physical::TlsSpec::Orientation::perpendicular
                     ? "perpendicular"
                     : "longitudinal"}};
    j["modulation"] = {{"enabled", cfg.modulated},
                       {"g_L", cfg.g_L},
                       {"omega_b", cfg.omega_b > 0.0
                                       ? json(quantity_string(cfg.omega_b, "rad/fs"))
                                       : json("auto")},
                       {"phi_0", quantity_string(cfg.phi_0, "rad")}};
    j["initial_state"] = {{"c1", {cfg.c1.real(), cfg.c1.imag()}},
                          {"c2", {cfg.c2.real(), cfg.c2.imag()}}};
    j["arrival_time"] = quantity_string(cfg.t0, "fs");
    if (cfg.has_train) {
        json t;
        t["n_electrons"] = cfg.train.n_electrons;
        t["arrival_law"] = arrival_law_name(cfg.train.arrival_law);
        t["phase_law"] = phase_law_name(cfg.train.phase_law);
        t["omega_b"] = cfg.train.omega_b > 0.0
                           ? json(quantity_string(cfg.train.omega_b, "rad/fs"))
                           : json("auto");
        t["harmonic"] = cfg.train.harmonic;
        t["t_00"] = quantity_string(cfg.train.t_00, "fs");
        t["phi_0"] = quantity_string(cfg.train.phi_0, "rad");
        if (!cfg.train.fixed_arrivals.empty()) {
            json arr = json::array();
            for (double v : cfg.train.fixed_arrivals)
                arr.push_back(quantity_string(v, "fs"));
            t["fixed_arrivals"] = arr;
        }
        t["method"] = cfg.train_method;
        j["train"] = t;
    }
    if (!cfg.sigma_scan.empty())
        j["scan"] = {{cfg.scan_transit_units ? "sigma_bar_et" : "sigma_over_T21",
                      cfg.sigma_scan}};
    j["ensemble_seeds"] = cfg.n_seeds;
    j["trajectory_samples"] = cfg.trajectory_samples;
    j["grid"] = {{"max_points", cfg.max_points}};
    return j;
}

// ---------------------------------------------------------------------------
// validation report
// ---------------------------------------------------------------------------

nlohmann::json validation_report(const ScenarioConfig& cfg) {
    cfg.validate();
    const Engine e = make_engine(cfg);

    json r;
    r["scenario"] = to_string(cfg.kind);
    r["model"] = to_string(cfg.model);
    r["seed"] = cfg.seed;

    json d;
    d["gamma0"] = e.kin.gamma0;
    d["beta0"] = e.kin.beta0;
    d["v0_nm_per_fs"] = e.kin.v0;
    d["t_r_fs"] = e.kin.t_r;
    d["T21_fs"] = e.T21;
    d["omega21_rad_per_fs"] = e.omega21;
    d["sigma_bar_et"] = cfg.beam.sigma_et / e.T21;
    d["Gamma"] = e.omega21 * cfg.beam.sigma_et;
    d["coupling_g"] = e.g;
    d["coupling_g_squared"] = e.g * e.g;
    d["truncation_radius_nm"] = coupling::truncation_radius(e.geom, e.kin);
    r["derived"] = d;

    if (cfg.modulated) {
        wavepacket::QewSpec qew = cfg.make_qew(cfg.t0, cfg.phi_0);
        const auto spectrum = config_spectrum(cfg, e);
        r["modulation"] = {
            {"omega_b_rad_per_fs", qew.omega_b},
            {"m_max", wavepacket::sideband_cutoff(cfg.g_L)},
            {"dispersion_phase_rad", wavepacket::dispersion_phase(qew, e.kin)},
            {"drifted_sigma_t_fs", wavepacket::drifted_sigma_t(qew, e.kin)},
            {"f1_abs", std::abs(spectrum.harmonic(1))}};
    }

    const bool wants_quantum =
        cfg.model != Model::analytic && cfg.kind != Kind::fig2_kernel;
    if (wants_quantum) {
        // estimate at the largest packet of the scenario
        double sigma_et = cfg.beam.sigma_et;
        if ((cfg.kind == Kind::fig3_size_scan) && !cfg.sigma_scan.empty())
            sigma_et = scan_sigma_et(
                cfg, e, *std::max_element(cfg.sigma_scan.begin(), cfg.sigma_scan.end()));
        wavepacket::QewSpec qew = cfg.make_qew(cfg.t0, cfg.phi_0);
        qew.sigma_et = sigma_et;
        try {
            const double t_total = 2.0 * quantum::interaction_half_window(qew, e.kin);
            quantum::GridOptions gopts;
            gopts.max_points = cfg.max_points;
            const auto grid = quantum::build_grid(qew, e.kin, e.geom, t_total, gopts);
            const double dt = quantum::default_time_step(e.kin, cfg.tls);
            const auto n_steps = static_cast<std::size_t>(std::ceil(t_total / dt));
            r["grid_estimate"] = {{"n_z", grid.n_z},
                                  {"dz_nm", grid.dz},
                                  {"length_nm", grid.length()},
                                  {"dt_fs", dt},
                                  {"n_steps", n_steps},
                                  {"bytes_per_component", grid.n_z * 32}};
        } catch (const std::exception& ex) {
            r["grid_estimate"] = {{"error", ex.what()}};
        }
    }

    json warnings = json::array();
    if (cfg.modulated) {
        const double period = 2.0 * std::numbers::pi / cfg.omega_b_resolved();
        if (cfg.beam.sigma_et <= period)
            warnings.push_back(
                "modulated envelope shorter than one modulation period "
                "(sigma_et <= 2*pi/omega_b): the harmonic decomposition of the "
                "packet density loses validity");
    }
    if ((cfg.kind == Kind::fig4_point_train || cfg.kind == Kind::fig6_correlated_train) &&
        cfg.n_seeds < 20)
        warnings.push_back("fewer than 20 ensemble seeds: random-arrival statistics "
                           "will be noisy");
    r["warnings"] = warnings;
    return r;
}

std::string render_validation(const nlohmann::json& r) {
    std::string out;
    out += "scenario: " + r["scenario"].get<std::string>() +
           " (model: " + r["model"].get<std::string>() +
           ", seed: " + std::to_string(r["seed"].get<std::uint64_t>()) + ")\n";
    const auto& d = r["derived"];
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "beam: gamma0 = %.9g, beta0 = %.9g, v0 = %.9g nm/fs, t_r = %.6g fs\n",
                  d["gamma0"].get<double>(), d["beta0"].get<double>(),
                  d["v0_nm_per_fs"].get<double>(), d["t_r_fs"].get<double>());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "tls: T21 = %.9g fs, omega21 = %.9g rad/fs\n",
                  d["T21_fs"].get<double>(), d["omega21_rad_per_fs"].get<double>());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "coupling: g = %.6e (g^2 = %.6e), truncation radius = %.4g nm\n",
                  d["coupling_g"].get<double>(), d["coupling_g_squared"].get<double>(),
                  d["truncation_radius_nm"].get<double>());
    out += buf;
    std::snprintf(buf, sizeof buf, "packet: sigma_et/T21 = %.6g (Gamma = %.6g)\n",
                  d["sigma_bar_et"].get<double>(), d["Gamma"].get<double>());
    out += buf;
    if (r.contains("modulation")) {
        const auto& mo = r["modulation"];
        std::snprintf(buf, sizeof buf,
                      "modulation: omega_b = %.9g rad/fs, m_max = %d, phi_D = %.6g rad, "
                      "|f1| = %.6g, drifted sigma_t = %.6g fs\n",
                      mo["omega_b_rad_per_fs"].get<double>(), mo["m_max"].get<int>(),
                      mo["dispersion_phase_rad"].get<double>(), mo["f1_abs"].get<double>(),
                      mo["drifted_sigma_t_fs"].get<double>());
        out += buf;
    }
    if (r.contains("grid_estimate")) {
        const auto& ge = r["grid_estimate"];
        if (ge.contains("error")) {
            out += "grid estimate: ERROR: " + ge["error"].get<std::string>() + "\n";
        } else {
            std::snprintf(buf, sizeof buf,
                          "grid estimate: n_z = %zu (dz = %.4g nm, L = %.6g nm), "
                          "dt = %.6g fs, n_steps = %zu\n",
                          ge["n_z"].get<std::size_t>(), ge["dz_nm"].get<double>(),
                          ge["length_nm"].get<double>(), ge["dt_fs"].get<double>(),
                          ge["n_steps"].get<std::size_t>());
            out += buf;
        }
    }
    const auto& warnings = r["warnings"];
    if (warnings.empty()) {
        out += "warnings: none\n";
    } else {
        out += "warnings:\n";
        for (const auto& wmsg : warnings) out += "  - " + wmsg.get<std::string>() + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// run_scenario / run_sweep
// ---------------------------------------------------------------------------

RunResult run_scenario(const ScenarioConfig& cfg, const nlohmann::json* annotation) {
    cfg.validate();
    const Engine e = make_engine(cfg);
    Writer w(cfg.outdir);

    json summary;
    switch (cfg.kind) {
    case Kind::fig2_kernel: summary = run_fig2(cfg, e, w); break;
    case Kind::fig3_size_scan: summary = run_fig3(cfg, e, w); break;
    case Kind::fig4_point_train: summary = run_fig4(cfg, e, w); break;
    case Kind::fig5_single_modulated: summary = run_fig5(cfg, e, w); break;
    case Kind::fig6_correlated_train: summary = run_fig6(cfg, e, w); break;
    case Kind::custom: summary = run_custom(cfg, e, w); break;
    }

    summary["scenario"] = to_string(cfg.kind);
    summary["model"] = to_string(cfg.model);
    summary["seed"] = cfg.seed;
    summary["version"] = kVersion;
    bool all_ok = true;
    if (summary.contains("sanity"))
        for (const auto& entry : summary["sanity"])
            if (!entry["pass"].get<bool>()) all_ok = false;
    summary["sanity_pass"] = all_ok;

    const json manifest = make_manifest(cfg, e, w.files, annotation);
    w.text("summary.json", summary.dump(2) + "\n");
    w.text("manifest.json", manifest.dump(2) + "\n");

    RunResult res;
    res.summary = std::move(summary);
    res.files = w.names;
    return res;
}

int run_sweep(const nlohmann::json& base_config, const std::string& outdir, int jobs) {
    if (!base_config.is_object() || !base_config.contains("sweep"))
        fail("sweep: config must contain a \"sweep\" object");
    const json& sw = base_config["sweep"];
    if (!sw.is_object() || sw.empty())
        fail("sweep: \"sweep\" must be a non-empty object mapping config paths to arrays");

    std::vector<std::pair<std::string, json>> axes;
    for (auto it = sw.begin(); it != sw.end(); ++it) {
        if (!it.value().is_array() || it.value().empty())
            fail("sweep: \"" + it.key() + "\" must be a non-empty array of values");
        axes.emplace_back(it.key(), it.value());
    }
    std::sort(axes.begin(), axes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::size_t total = 1;
    for (const auto& ax : axes) {
        total *= ax.second.size();
        if (total > 10000) fail("sweep: more than 10000 points");
    }

    json stripped = base_config;
    stripped.erase("sweep");

    struct Point {
        std::size_t index;
        json config;
        json overrides;
        std::string dir;
    };
    std::vector<Point> points;
    points.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        json cfgj = stripped;
        json ov = json::object();
        std::size_t rem = idx;
        for (auto ax = axes.rbegin(); ax != axes.rend(); ++ax) {
            const std::size_t n = ax->second.size();
            const json& value = ax->second[rem % n];
            rem /= n;
            ov[ax->first] = value;
            std::string ptr = "/" + ax->first;
            std::replace(ptr.begin(), ptr.end(), '.', '/');
            cfgj[json::json_pointer(ptr)] = value;
        }
        char tag[16];
        std::snprintf(tag, sizeof tag, "point_%03zu", idx);
        const std::string dir = outdir + "/" + tag;
        cfgj["output"] = dir;
        points.push_back({idx, std::move(cfgj), std::move(ov), dir});
    }

    // validate every point before running any (all-or-nothing config phase)
    for (const auto& p : points) config_from_json(p.config).validate();

    std::vector<std::string> errors(points.size());
    std::vector<char> failed(points.size(), 0);
    std::atomic<std::size_t> next{0};
    const int n_workers = std::clamp(jobs, 1, 16);

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            try {
                const ScenarioConfig cfg = config_from_json(points[i].config);
                json ann = {{"index", points[i].index}, {"overrides", points[i].overrides}};
                run_scenario(cfg, &ann);
            } catch (const std::exception& ex) {
                failed[i] = 1;
                errors[i] = ex.what();
            }
        }
    };
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    json index;
    index["schema_version"] = 1;
    index["generator"] = {{"name", "feberi"}, {"version", kVersion}};
    json axes_json = json::object();
    for (const auto& ax : axes) axes_json[ax.first] = ax.second;
    index["axes"] = axes_json;
    json pts = json::array();
    int n_failed = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        json p = {{"index", points[i].index},
                  {"directory", points[i].dir},
                  {"overrides", points[i].overrides},
                  {"status", failed[i] ? "failed" : "ok"}};
        if (failed[i]) {
            p["error"] = errors[i];
            ++n_failed;
        }
        pts.push_back(std::move(p));
    }
    index["points"] = pts;

    fs::create_directories(outdir);
    std::ofstream out(fs::path(outdir) / "sweep_index.json", std::ios::binary);
    out << index.dump(2) << "\n";
    if (!out) throw std::runtime_error("sweep: cannot write sweep_index.json");
    return n_failed;
}

} // namespace feberi::scenario
