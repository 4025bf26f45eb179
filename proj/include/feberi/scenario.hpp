// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Scenario layer: turns a JSON configuration (unit-suffixed quantity strings,
// explicit seed) into datasets on disk — canonical CSV files plus a manifest
// that records the fully resolved configuration, every constant and derived
// quantity the run consumed, and the RNG layout, so a dataset can be
// regenerated bit for bit from its manifest alone.
//
// Built-in scenario kinds reproduce the toolkit's reference figures:
//   fig2_kernel            interaction-kernel profiles vs. packet size
//   fig3_size_scan         single-electron P2 vs. packet size, both models
//   fig4_point_train       unmodulated train build-up (in-phase vs. random)
//   fig5_single_modulated  one modulated packet: P2(t), ground + superposition
//   fig6_correlated_train  modulated train: correlated vs. random-phase
//   custom                 user-defined single electron or train
//
// `preset(kind)` pins the reference parameter set (200 keV beam, 2 nm impact
// parameter, 2 eV / 5 Debye perpendicular TLS); a user configuration overlays
// it, so shrunken smoke-test variants of the expensive scenarios are ordinary
// config files.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "feberi/analytic.hpp"
#include "feberi/coupling.hpp"
#include "feberi/physical.hpp"
#include "feberi/wavepacket.hpp"

namespace feberi::scenario {

/// Toolkit version recorded in manifests.
inline constexpr const char* kVersion = "1.0.0";

enum class Kind {
    fig2_kernel,
    fig3_size_scan,
    fig4_point_train,
    fig5_single_modulated,
    fig6_correlated_train,
    custom,
};

enum class Model { analytic, quantum, both };

std::string to_string(Kind kind);
std::string to_string(Model model);
Kind kind_from_string(const std::string& name);
Model model_from_string(const std::string& name);

/// Fully resolved scenario description (internal units: nm, fs, eV).
struct ScenarioConfig {
    Kind kind = Kind::custom;
    Model model = Model::both;

    physical::BeamConfig beam;
    physical::TlsSpec tls;

    // PINEM modulation block (applies to every packet of the scenario).
    bool modulated = false;
    double g_L = 0.0;     ///< |g_L|
    double omega_b = 0.0; ///< rad/fs; 0 → resolve to ω21 ("auto")
    double phi_0 = 0.0;   ///< rad

    // Initial TLS state (custom scenarios; figure kinds pin their own).
    std::complex<double> c1{1.0, 0.0};
    std::complex<double> c2{0.0, 0.0};
    double t0 = 0.0; ///< single-electron envelope arrival time, fs

    bool has_train = false;
    analytic::TrainSpec train;        ///< omega_b 0 → resolve; seed filled from `seed`
    std::string train_method = "channel"; ///< "channel" | "direct"

    std::vector<double> sigma_scan; ///< packet-size scan points (fig2/fig3)
    /// Scan normalization: true → σ_et/t_r (transit-time units, the natural
    /// axis of the kernel profiles), false → σ_et/T21 (period units).
    bool scan_transit_units = false;
    int n_seeds = 20;               ///< ensemble size for random-draw statistics
    int trajectory_samples = 400;   ///< P2(t) samples per quantum evolution
    std::size_t max_points = std::size_t{1} << 20; ///< spatial-grid ceiling

    std::string outdir;
    std::uint64_t seed = 0;
    bool seed_set = false;

    /// Throws std::invalid_argument on any violated invariant, including a
    /// missing seed (every run must be explicitly seeded).
    void validate() const;

    physical::Kinematics kinematics() const { return physical::derive_kinematics(beam); }
    coupling::Geometry geometry() const { return coupling::make_geometry(beam, tls); }
    /// ω_b with "auto" resolved to ω21.
    double omega_b_resolved() const;
    /// Packet template for a given arrival time and modulation phase.
    wavepacket::QewSpec make_qew(double arrival, double phase0) const;
    /// Train with omega_b resolved and the run seed applied (seed + offset
    /// selects an ensemble member).
    analytic::TrainSpec resolved_train(std::uint64_t seed_offset = 0) const;
};

/// Reference parameter set for a scenario kind.
ScenarioConfig preset(Kind kind);

/// Builds a configuration from JSON: starts from preset(j["scenario"]) and
/// overlays every key present. Unknown keys and unit-less dimensioned values
/// are errors. `kind_override` pins the scenario kind (figure subcommands);
/// a conflicting "scenario" key is then an error.
ScenarioConfig config_from_json(const nlohmann::json& j,
                                const std::string& kind_override = "");

/// Fully resolved configuration as JSON with unit-suffixed internal-unit
/// strings; config_from_json(config_to_json(cfg)) reproduces cfg exactly.
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Derived quantities, a quantum grid estimate, and precondition warnings
/// (e.g. a modulated envelope shorter than one modulation period), without
/// running anything.
nlohmann::json validation_report(const ScenarioConfig& cfg);

/// Human-readable rendering of validation_report.
std::string render_validation(const nlohmann::json& report);

struct RunResult {
    nlohmann::json summary;         ///< contents of summary.json
    std::vector<std::string> files; ///< files written, relative to outdir
};

/// Runs the scenario and writes outdir/{*.csv, manifest.json, summary.json}.
/// The summary carries key scalars, fit coefficients and built-in sanity
/// checks (reported, never silently "fixed"). `annotation`, when non-null,
/// is stored in the manifest (used by sweeps to record their overrides).
RunResult run_scenario(const ScenarioConfig& cfg,
                       const nlohmann::json* annotation = nullptr);

/// Expands j["sweep"] (object: dotted config path → array of JSON values)
/// into the Cartesian product, runs each point into <outdir>/point_NNN with
/// the overrides applied, and writes <outdir>/sweep_index.json. Runs points
/// on `jobs` worker threads. Returns the number of failed points.
int run_sweep(const nlohmann::json& base_config, const std::string& outdir,
              int jobs = 1);

} // namespace feberi::scenario
