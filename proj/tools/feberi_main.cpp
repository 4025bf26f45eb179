// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Command-line front end. Exit codes: 0 success, 1 configuration or
// validation error, 2 runtime failure while producing a dataset.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "feberi/fft.hpp"
#include "feberi/scenario.hpp"

namespace {

namespace sc = feberi::scenario;
using nlohmann::json;

/// FFTW measured plans can differ from process to process (timing noise),
/// which perturbs results at the rounding level. Persisting planner wisdom
/// across invocations makes re-runs bitwise identical. Resolution order:
/// $FEBERI_WISDOM, $XDG_CACHE_HOME/feberi/wisdom, $HOME/.cache/feberi/wisdom.
std::string wisdom_path() {
    if (const char* p = std::getenv("FEBERI_WISDOM")) return p;
    std::string base;
    if (const char* x = std::getenv("XDG_CACHE_HOME"))
        base = x;
    else if (const char* h = std::getenv("HOME"))
        base = std::string(h) + "/.cache";
    else
        return {};
    return base + "/feberi/wisdom";
}

void import_wisdom() {
    const std::string path = wisdom_path();
    if (!path.empty()) feberi::fft::import_wisdom(path);
}

void export_wisdom() {
    const std::string path = wisdom_path();
    if (path.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
    if (!ec) feberi::fft::export_wisdom(path);
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument(path + ": top level must be a JSON object");
    return j;
}

struct Args {
    std::string config_path;
    std::string outdir;
    std::string model;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int jobs = 1;
};

/// Flags overlay the config file; a figure subcommand pins the scenario kind.
json resolve_config_json(const Args& a) {
    json j = a.config_path.empty() ? json::object() : load_config(a.config_path);
    if (a.seed_given) j["seed"] = a.seed;
    if (!a.outdir.empty()) j["output"] = a.outdir;
    if (!a.model.empty()) j["model"] = a.model;
    return j;
}

void print_sanity(const json& summary) {
    if (!summary.contains("sanity")) return;
    for (const auto& entry : summary["sanity"]) {
        const bool pass = entry["pass"].get<bool>();
        std::ostringstream line;
        line << (pass ? "[ok] " : "[!!] ") << entry["name"].get<std::string>()
             << " (measured " << entry["measured"].get<double>() << ", expected "
             << entry["bound"].get<std::string>() << ")";
        std::cout << line.str() << "\n";
    }
}

int run_one(const sc::ScenarioConfig& cfg) {
    import_wisdom();
    const sc::RunResult result = sc::run_scenario(cfg);
    export_wisdom();
    std::cout << "scenario " << sc::to_string(cfg.kind) << " (model "
              << sc::to_string(cfg.model) << ", seed " << cfg.seed << ")\n";
    print_sanity(result.summary);
    std::cout << "wrote " << cfg.outdir << " (" << result.files.size() << " files)\n";
    if (result.summary.contains("sanity_pass") &&
        !result.summary["sanity_pass"].get<bool>())
        std::cout << "note: some built-in sanity checks did not pass; see "
                  << cfg.outdir << "/summary.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"feberi: free-electron / bound-electron resonant-interaction "
                 "simulation toolkit"};
    app.set_version_flag("--version", std::string("feberi ") + sc::kVersion);
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd = nullptr;
        Args args;
        std::string kind_override;
        bool is_validate = false;
        bool is_sweep = false;
    };
    std::vector<Sub> subs(8);

    auto add_common = [](CLI::App* cmd, Args& a, bool config_required, bool with_jobs) {
        auto* opt = cmd->add_option("-c,--config", a.config_path,
                                    "JSON configuration file");
        if (config_required) opt->required();
        cmd->add_option("-o,--out", a.outdir, "output directory (overrides config)");
        cmd->add_option("-s,--seed", a.seed, "run seed (overrides config)");
        cmd->add_option("-m,--model", a.model,
                        "model selector: analytic, quantum or both");
        if (with_jobs)
            cmd->add_option("-j,--jobs", a.jobs, "worker threads for sweep points")
                ->check(CLI::Range(1, 16));
    };

    const struct {
        const char* name;
        const char* desc;
        const char* kind;
        bool config_required;
    } defs[] = {
        {"validate", "check a configuration and report derived quantities", "", true},
        {"run", "run the scenario described by a configuration file", "", true},
        {"fig2", "interaction-kernel profiles vs. packet size", "fig2_kernel", false},
        {"fig3", "single-electron excitation vs. packet size", "fig3_size_scan", false},
        {"fig4", "unmodulated train build-up (in-phase vs. random)",
         "fig4_point_train", false},
        {"fig5", "single modulated packet, time-resolved excitation",
         "fig5_single_modulated", false},
        {"fig6", "modulated train: correlated vs. random modulation phase",
         "fig6_correlated_train", false},
        {"sweep", "run the Cartesian parameter sweep described by the config",
         "", true},
    };
    for (std::size_t i = 0; i < subs.size(); ++i) {
        Sub& s = subs[i];
        s.cmd = app.add_subcommand(defs[i].name, defs[i].desc);
        s.kind_override = defs[i].kind;
        s.is_validate = std::string(defs[i].name) == "validate";
        s.is_sweep = std::string(defs[i].name) == "sweep";
        add_common(s.cmd, s.args, defs[i].config_required, s.is_sweep);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help/--version exit 0; anything else is a usage error.
        return app.exit(e) == 0 ? 0 : 1;
    }

    Sub* chosen = nullptr;
    for (Sub& s : subs)
        if (s.cmd->parsed()) chosen = &s;
    if (!chosen) return 1; // unreachable: a subcommand is required
    chosen->args.seed_given = chosen->cmd->count("--seed") > 0;

    // Configuration problems are always std::invalid_argument (exit 1);
    // failures while producing a dataset are anything else (exit 2).
    try {
        const json config_json = resolve_config_json(chosen->args);

        if (chosen->is_sweep) {
            std::string outdir = chosen->args.outdir;
            if (outdir.empty() && config_json.contains("output")) {
                if (!config_json["output"].is_string())
                    throw std::invalid_argument("config: output must be a string");
                outdir = config_json["output"].get<std::string>();
            }
            if (outdir.empty())
                throw std::invalid_argument(
                    "sweep: an output directory is required (--out or \"output\" "
                    "in the config)");
            import_wisdom();
            const int failed = sc::run_sweep(config_json, outdir, chosen->args.jobs);
            export_wisdom();
            std::cout << "sweep index written to " << outdir << "/sweep_index.json\n";
            if (failed > 0) {
                std::cerr << "error: " << failed << " sweep point(s) failed\n";
                return 2;
            }
            return 0;
        }

        const sc::ScenarioConfig cfg =
            sc::config_from_json(config_json, chosen->kind_override);
        cfg.validate();
        if (chosen->is_validate) {
            std::cout << sc::render_validation(sc::validation_report(cfg));
            return 0;
        }
        return run_one(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
