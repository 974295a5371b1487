// Scenario pipelines behind the CLI: execute a configured run (solver +
// diagnostics + artifact files), re-verify a run directory from its stored
// snapshots, and render report files from the stored diagnostics.
#pragma once

#include "axilab/config.hpp"
#include "axilab/gamma_solver.hpp"
#include "axilab/ns_solver.hpp"
#include "axilab/report.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace axilab {

struct MissingArtifact : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunOutput {
    std::string dir;
    DiagnosticsReport diagnostics;
    bool has_verifier = false;
    VerifierReport verifier;
    RunManifest manifest;
    // per-step solver statistics (gamma runs fill the first, ns runs the
    // second; the suite keeps its last case)
    std::vector<GammaStepStats> gamma_stats;
    std::vector<NSStepStats> ns_stats;
};

// Runs the configured solver, writes snapshots, the per-step CSV, the
// diagnostics JSON/CSV, the verifier JSON when enabled, and the manifest.
RunOutput execute_run(const RunConfig& rc);

// Reloads config + snapshots from a run directory and re-executes the
// configured estimate checks; writes verifier.json there and returns it.
VerifierReport execute_verify(const std::string& run_dir);

// Renders report files from stored diagnostics: format is csv, json or svg.
void render_report(const std::string& run_dir, const std::string& format);

// Partial readers used by the renderers (fields needed for tables/plots).
DiagnosticsReport diagnostics_from_json_text(const std::string& text);
VerifierReport verifier_from_json_text(const std::string& text);

} // namespace axilab
