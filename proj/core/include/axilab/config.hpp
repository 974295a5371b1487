// Sectioned key-value run configuration:
//
//   [grid]
//   nr = 64
//   r_max = 1.0
//   [drift.b3]
//   kind = "scaled_inverse_r"
//   c = 1.0
//
// Values are quoted strings, numbers, booleans, or arrays of those in
// brackets. '#' starts a comment. Parse errors carry line numbers.
#pragma once

#include "axilab/drift.hpp"
#include "axilab/grid.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace axilab {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& what, int line_no)
        : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    int line = 0;
};

class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    double get_number(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& section,
                                             const std::string& key) const;
    std::vector<double> get_number_list(const std::string& section, const std::string& key) const;

    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    double get_number_or(const std::string& section, const std::string& key,
                         double fallback) const;
    long get_int_or(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;

    // Sorted re-serialization; stable under reparsing, used for the run hash.
    std::string canonical() const;
    std::uint64_t hash() const; // FNV-1a over canonical()

    const std::string& origin() const { return origin_; }

private:
    struct Value {
        enum class Kind { string, number, boolean, string_list, number_list } kind;
        std::string str;
        double num = 0.0;
        bool flag = false;
        std::vector<std::string> str_list;
        std::vector<double> num_list;
        int line = 0;
    };

    const Value& lookup(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, Value>> sections_;
    std::string origin_;
};

// Semantic run configuration assembled from a parsed Config.
struct RunConfig {
    enum class SolverKind { gamma, ns, verify_suite };

    Grid grid;
    SolverKind solver = SolverKind::gamma;
    DriftSpec drift;

    std::string initial_preset;
    std::string initial_file; // snapshot path; takes precedence over the preset
    std::map<std::string, double> initial_params;

    double end_time = 0.1;
    double dt = 0.0;
    double cfl = 0.4;
    double snapshot_dt = 0.0;
    std::uint32_t seed = 0;
    std::string output_dir = "out";
    std::string outer_bc = "dirichlet_zero"; // dirichlet_zero | fixed

    double scales_r0 = 0.0; // 0 selects r_max / 4
    int scales_levels = 3;
    double anchor_z = -1.0; // < 0 selects the domain midline
    std::vector<std::string> diagnostics; // norms, oscillation, verifier, liouville

    double verifier_c0 = 0.1;
    double verifier_delta = 0.05;
    int mean_value_p = 3;
    double gamma_min = 0.95; // candidate selection
    double case_threshold = 10.0; // rk Qk split between case labels

    bool reproducible = false;

    static RunConfig from_config(const Config& cfg);
    std::string canonical_text;  // the canonical config the run was built from
    std::uint64_t config_hash = 0;
};

} // namespace axilab
