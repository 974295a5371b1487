// Diagnostics assembly and serialization: one JSON document per run with the
// scale-invariant norms, the per-scale oscillation profile, the Holder fit,
// verifier entries, and the rescaling-lab section, plus CSV and SVG renderers.
#pragma once

#include "axilab/liouville.hpp"
#include "axilab/norms.hpp"
#include "axilab/verifier.hpp"

#include <string>
#include <utility>
#include <vector>

namespace axilab {

inline constexpr const char* kArtifactVersion = "0.3.0";

struct LiouvilleSection {
    bool present = false;
    std::vector<BlowupCandidate> candidates;
    double rk_qk = 0.0;
    std::string case_label; // "case1" (bounded r_k Q_k) or "case2"
    double swirl_sup = 0.0;
    double swirl_bound = 0.0;
    double planar = 0.0;
    double constancy = 0.0;
    double mean_value_defect = 0.0;
};

struct DiagnosticsReport {
    bool has_enorm = false;
    ENormReport enorm;

    bool has_profile = false;
    OscillationProfile profile;
    bool has_fit = false;
    HolderFit fit;

    LiouvilleSection liouville;

    // free-form named scalars (suite summaries and the like)
    std::vector<std::pair<std::string, double>> extras;

    // provenance
    std::string config_hash_hex;
    std::string artifact_version = kArtifactVersion;
    std::string grid_desc;
    double anchor_z = 0.0;
    double anchor_t = 0.0;
};

struct RunManifest {
    std::string config_hash_hex;
    std::string artifact_version = kArtifactVersion;
    std::string created_at; // ISO-8601, or the epoch under reproducible runs
    std::vector<std::string> files;
};

std::string diagnostics_to_json(const DiagnosticsReport& rep);
void write_diagnostics_json(const std::string& path, const DiagnosticsReport& rep);
void write_diagnostics_csv(const std::string& path, const DiagnosticsReport& rep);

std::string verifier_to_json(const VerifierReport& rep);
void write_verifier_json(const std::string& path, const VerifierReport& rep);
std::string verdict_name(VerifierEntry::Verdict v);

void write_manifest_json(const std::string& path, const RunManifest& manifest);

// Log-log oscillation plot with the fitted slope annotated; renders an
// empty-but-valid document when no scales are present.
void write_oscillation_svg(const std::string& path, const DiagnosticsReport& rep,
                           bool reproducible);

// Human-readable verifier table (for the CLI summary).
std::string verifier_table(const VerifierReport& rep);

} // namespace axilab
