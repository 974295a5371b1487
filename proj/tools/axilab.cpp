// axilab: scenario runner for the axisymmetric flow laboratory.
//
//   axilab run <config-or-preset> [--output DIR] [--reproducible]
//   axilab verify <run-dir>
//   axilab report <run-dir> --format csv|json|svg
//   axilab presets
//
// Exit codes: 0 success, 2 configuration error, 3 missing artifacts,
// 4 solver failure, 5 verifier failure.

#include <CLI11.hpp>

#include "axilab/config.hpp"
#include "axilab/gamma_solver.hpp"
#include "axilab/presets.hpp"
#include "axilab/report.hpp"
#include "axilab/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitMissing = 3;
constexpr int kExitSolver = 4;
constexpr int kExitVerifier = 5;

int cmd_run(const std::string& source, const std::string& output_override, bool reproducible) {
    axilab::Config cfg;
    try {
        if (axilab::is_builtin_run(source))
            cfg = axilab::Config::parse_string(axilab::builtin_run_text(source), source);
        else if (std::filesystem::exists(source))
            cfg = axilab::Config::parse_file(source);
        else {
            std::cerr << "axilab run: '" << source << "' is neither a config file nor a preset\n";
            return kExitConfig;
        }
    } catch (const std::exception& ex) {
        std::cerr << "axilab run: config error: " << ex.what() << '\n';
        return kExitConfig;
    }

    axilab::RunConfig rc;
    try {
        rc = axilab::RunConfig::from_config(cfg);
    } catch (const std::exception& ex) {
        std::cerr << "axilab run: config error: " << ex.what() << '\n';
        return kExitConfig;
    }
    if (!output_override.empty()) rc.output_dir = output_override;
    if (reproducible) rc.reproducible = true;

    try {
        const axilab::RunOutput out = axilab::execute_run(rc);
        std::cout << "run complete: " << out.dir << '\n';
        if (out.has_verifier) {
            std::cout << axilab::verifier_table(out.verifier);
            if (!out.verifier.all_passed()) return kExitVerifier;
        }
        return kExitOk;
    } catch (const axilab::CflViolation& ex) {
        std::cerr << "axilab run: solver failure: " << ex.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& ex) {
        std::cerr << "axilab run: solver failure: " << ex.what() << '\n';
        return kExitSolver;
    }
}

int cmd_verify(const std::string& run_dir) {
    try {
        const axilab::VerifierReport rep = axilab::execute_verify(run_dir);
        std::cout << axilab::verifier_table(rep);
        return rep.all_passed() ? kExitOk : kExitVerifier;
    } catch (const axilab::MissingArtifact& ex) {
        std::cerr << "axilab verify: " << ex.what() << '\n';
        return kExitMissing;
    } catch (const axilab::ConfigError& ex) {
        std::cerr << "axilab verify: config error: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& ex) {
        std::cerr << "axilab verify: " << ex.what() << '\n';
        return kExitSolver;
    }
}

int cmd_report(const std::string& run_dir, const std::string& format) {
    try {
        axilab::render_report(run_dir, format);
        std::cout << "report (" << format << ") written in " << run_dir << '\n';
        return kExitOk;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "axilab report: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const axilab::MissingArtifact& ex) {
        std::cerr << "axilab report: " << ex.what() << '\n';
        return kExitMissing;
    } catch (const std::exception& ex) {
        std::cerr << "axilab report: " << ex.what() << '\n';
        return kExitSolver;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"axisymmetric flow laboratory"};
    app.require_subcommand(1);

    std::string run_source, run_output;
    bool reproducible = false;
    auto* run = app.add_subcommand("run", "execute a run config or preset");
    run->add_option("config", run_source, "config file path or preset name")->required();
    run->add_option("--output", run_output, "override the output directory");
    run->add_flag("--reproducible", reproducible, "suppress timestamps in artifacts");

    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "re-run estimate checks on a run directory");
    verify->add_option("dir", verify_dir, "run directory")->required();

    std::string report_dir, report_format = "csv";
    auto* report = app.add_subcommand("report", "render report files from stored diagnostics");
    report->add_option("dir", report_dir, "run directory")->required();
    report->add_option("--format", report_format, "csv | json | svg");

    auto* presets = app.add_subcommand("presets", "list shipped run presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed()) return cmd_run(run_source, run_output, reproducible);
    if (verify->parsed()) return cmd_verify(verify_dir);
    if (report->parsed()) return cmd_report(report_dir, report_format);
    if (presets->parsed()) {
        for (const auto& name : axilab::builtin_run_names()) std::cout << name << '\n';
        return kExitOk;
    }
    return kExitConfig;
}
