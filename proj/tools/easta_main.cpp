// Command-line front end: builds environment-assisted shortcuts for the
// two-level drive model, emits plot-ready CSV tables, and runs the
// verification suite. Exit codes: 0 success, 1 invariant/computation
// failure, 2 configuration error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "easta/config.hpp"
#include "easta/experiments.hpp"
#include "easta/verify.hpp"
#include "easta/version.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    int steps = 0;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Run-config JSON path (schema 1)");
    cmd->add_option("--out", opts.out_dir, "Output directory (overrides config out_dir)");
    cmd->add_option("--steps", opts.steps, "Grid steps K (overrides config model.steps)");
    cmd->add_option("--seed", opts.seed, "Random seed for the seeded checks");
}

easta::RunConfig load_config(const CommonOptions& opts) {
    easta::RunConfig cfg = opts.config_path.empty()
                               ? easta::RunConfig::defaults()
                               : easta::RunConfig::from_file(opts.config_path);
    if (!opts.out_dir.empty()) {
        cfg.out_dir = opts.out_dir;
    }
    if (opts.steps != 0) {
        cfg.model.steps = opts.steps;
    }
    cfg.validate();
    return cfg;
}

std::filesystem::path prepare_out_dir(const easta::RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw easta::ConfigError("cannot create output directory '" + cfg.out_dir + "'");
    }
    return dir;
}

int run_table_command(const CommonOptions& opts, const std::string& name) {
    const easta::RunConfig cfg = load_config(opts);
    const auto dir = prepare_out_dir(cfg);
    easta::ResultTable table;
    if (name == "figure-overlap") {
        table = easta::figure_overlap(cfg, opts.seed);
    } else if (name == "figure-cost") {
        table = easta::figure_cost(cfg, opts.seed);
    } else {
        table = easta::sweep_tau(cfg, opts.seed);
    }
    std::string file = name;
    for (auto& c : file) {
        if (c == '-') c = '_';
    }
    const auto path = dir / (file + ".csv");
    table.write_csv(path.string());
    std::cout << name << ": wrote " << table.rows.size() << " rows to " << path.string()
              << " (config " << cfg.hash() << ")\n";
    return 0;
}

int run_verify_command(const CommonOptions& opts) {
    const easta::RunConfig cfg = load_config(opts);
    const auto dir = prepare_out_dir(cfg);
    const easta::VerifyReport report = easta::run_verify(cfg, opts.seed);

    const auto path = dir / "verify.json";
    std::ofstream out(path);
    if (!out) {
        throw easta::ConfigError("cannot open '" + path.string() + "' for writing");
    }
    out << report.to_json().dump(2) << "\n";

    for (const auto& check : report.checks) {
        std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": "
                  << check.measured << " " << check.comparison << " " << check.tolerance;
        if (!check.note.empty()) {
            std::cout << "  (" << check.note << ")";
        }
        std::cout << "\n";
    }
    std::cout << (report.all_pass ? "verify: all checks passed" : "verify: FAILURES present")
              << " in " << report.elapsed_seconds << " s; report at " << path.string() << "\n";
    return report.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Environment-assisted shortcuts to adiabaticity: simulation and checks"};
    app.set_version_flag("--version", easta::kVersion);
    app.require_subcommand(1);

    CommonOptions opts;
    auto* overlap = app.add_subcommand(
        "figure-overlap", "Adiabatic-manifold overlaps: bare drive vs environment-assisted");
    auto* cost = app.add_subcommand(
        "figure-cost", "Cost curves of the counterdiabatic and environment drives");
    auto* sweep = app.add_subcommand("sweep-tau", "Total costs across protocol durations");
    auto* verify = app.add_subcommand("verify", "Run the invariant suite, write verify.json");
    for (auto* cmd : {overlap, cost, sweep, verify}) {
        add_common(cmd, opts);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            return run_verify_command(opts);
        }
        for (auto* cmd : {overlap, cost, sweep}) {
            if (cmd->parsed()) {
                return run_table_command(opts, cmd->get_name());
            }
        }
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const easta::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
