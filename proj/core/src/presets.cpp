#include "axilab/presets.hpp"

#include <cmath>

namespace axilab {
namespace {

const double kPi = std::acos(-1.0);

double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it != p.end() ? it->second : fallback;
}

// 1 for r <= r1, smooth descent to 0 at r2
double radial_taper(double r, double r1, double r2) {
    return smoothstep((r2 - std::abs(r)) / (r2 - r1));
}

// periodic cosine bump of width w centered at zc, compactly supported
double z_bump(double z, double zc, double w, double z_len) {
    double d = std::fmod(std::abs(z - zc), z_len);
    d = std::min(d, z_len - d);
    if (d >= 0.5 * w) return 0.0;
    return 0.5 * (1.0 + std::cos(2.0 * kPi * d / w));
}

} // namespace

ScalarField make_gamma_initial(const std::string& preset, const Grid& grid,
                               const std::map<std::string, double>& params) {
    const double amp = param(params, "amplitude", 1.0);
    if (preset == "zero")
        return ScalarField(grid, Parity::even);
    if (preset == "r2")
        return ScalarField::from_function(grid, Parity::even,
                                          [amp](double r, double) { return amp * r * r; });
    if (preset == "bump") {
        const double r1 = param(params, "r_inner", 0.3 * grid.r_max);
        const double r2 = param(params, "r_outer", 0.6 * grid.r_max);
        const double w = param(params, "z_width", 0.5 * grid.z_len);
        const double zc = 0.5 * grid.z_len;
        return ScalarField::from_function(grid, Parity::even, [=](double r, double z) {
            return amp * r * r * radial_taper(r, r1, r2) * z_bump(z, zc, w, grid.z_len);
        });
    }
    throw std::runtime_error("unknown gamma initial preset '" + preset + "'");
}

NSState make_ns_initial(const std::string& preset, const Grid& grid,
                        const std::map<std::string, double>& params) {
    NSState s;
    s.velocity = VectorFieldCyl(grid);
    s.pressure = ScalarField(grid, Parity::even);
    s.time = 0.0;
    if (preset == "zero") return s;

    if (preset == "rigid_rotation") {
        const double omega = param(params, "omega", 0.5);
        s.velocity.vtheta = ScalarField::from_function(
            grid, Parity::odd, [omega](double r, double) { return omega * r; });
        s.pressure = ScalarField::from_function(
            grid, Parity::even, [omega](double r, double) { return 0.5 * omega * omega * r * r; });
        return s;
    }
    if (preset == "swirl_decay") {
        const double omega = param(params, "omega", 0.1);
        const double eps = param(params, "perturbation", 0.2);
        const double r1 = param(params, "r_inner", 0.4 * grid.r_max);
        const double r2 = param(params, "r_outer", 0.8 * grid.r_max);
        const double k = 2.0 * kPi / grid.z_len;
        s.velocity.vtheta = ScalarField::from_function(grid, Parity::odd, [=](double r, double z) {
            return omega * r * radial_taper(r, r1, r2) * (1.0 + eps * std::cos(k * z));
        });
        return s;
    }
    throw std::runtime_error("unknown ns initial preset '" + preset + "'");
}

OuterBc preset_outer_bc(const std::string& preset, const std::string& requested) {
    if (requested == "fixed") return OuterBc::fixed;
    if (requested == "dirichlet_zero") {
        // steady presets only make sense with held boundary data
        if (preset == "r2" || preset == "rigid_rotation") return OuterBc::fixed;
        return OuterBc::dirichlet_zero;
    }
    throw std::runtime_error("unknown outer_bc '" + requested + "'");
}

namespace {

const std::map<std::string, std::string>& builtin_table() {
    static const std::map<std::string, std::string> table = {
        {"gamma_r2_steady", R"(# Gamma = r^2 steady state with zero drift
[grid]
nr = 64
nz = 64
r_max = 1.0
z_len = 1.0

[run]
solver = "gamma"
end_time = 0.1
snapshot_dt = 0.0002
outer_bc = "fixed"
output_dir = "out/gamma_r2_steady"

[initial]
preset = "r2"
amplitude = 1.0

[diagnostics]
scales_r0 = 0.25
scales_levels = 3
enable = ["norms", "oscillation"]
)"},
        {"gamma_b3_drift", R"(# compact bump advected by the singular axial drift (c/r) e_z
[grid]
nr = 64
nz = 64
r_max = 1.0
z_len = 1.0

[run]
solver = "gamma"
end_time = 0.0625
snapshot_dt = 0.0001
output_dir = "out/gamma_b3_drift"

[initial]
preset = "bump"
amplitude = 1.0

[drift.b3]
kind = "scaled_inverse_r"
c = 1.0

[diagnostics]
scales_r0 = 0.25
scales_levels = 3
enable = ["norms", "oscillation", "verifier"]
)"},
        {"gamma_bmo_drift", R"(# compact bump advected by a stream-function drift with BMO control
[grid]
nr = 64
nz = 64
r_max = 1.0
z_len = 1.0

[run]
solver = "gamma"
end_time = 0.0625
snapshot_dt = 0.0001
output_dir = "out/gamma_bmo_drift"

[initial]
preset = "bump"
amplitude = 1.0

[drift.b2]
amplitude = 0.5
z_mode = 1

[diagnostics]
scales_r0 = 0.25
scales_levels = 3
enable = ["norms", "oscillation", "verifier"]
)"},
        {"ns_rigid_rotation", R"(# rigid rotation steady state, driven wall
[grid]
nr = 64
nz = 64
r_max = 1.0
z_len = 1.0

[run]
solver = "ns"
end_time = 0.1
snapshot_dt = 0.005
outer_bc = "fixed"
output_dir = "out/ns_rigid_rotation"

[initial]
preset = "rigid_rotation"
omega = 0.5

[diagnostics]
enable = ["norms", "liouville"]
)"},
        {"ns_swirl_decay", R"(# tapered swirl column decaying viscously, no-slip wall
[grid]
nr = 64
nz = 64
r_max = 1.0
z_len = 1.0

[run]
solver = "ns"
end_time = 0.08
snapshot_dt = 0.0002
output_dir = "out/ns_swirl_decay"

[initial]
preset = "swirl_decay"
omega = 0.1
perturbation = 0.2

[diagnostics]
enable = ["norms", "oscillation", "liouville"]
)"},
        {"verify_suite_full", R"(# full admissible-drift verification suite
[grid]
nr = 64
nz = 64
r_max = 1.0
z_len = 1.0

[run]
solver = "verify_suite"
end_time = 0.0625
snapshot_dt = 0.0001
seed = 42
output_dir = "out/verify_suite_full"

[initial]
preset = "bump"
amplitude = 1.0

[diagnostics]
scales_r0 = 0.25
scales_levels = 3
enable = ["norms", "oscillation", "verifier"]

[verifier]
c0 = 0.1
delta = 0.05
mean_value_p = 3
)"},
    };
    return table;
}

} // namespace

bool is_builtin_run(const std::string& name) { return builtin_table().count(name) > 0; }

std::vector<std::string> builtin_run_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : builtin_table()) names.push_back(k);
    return names;
}

std::string builtin_run_text(const std::string& name) {
    auto it = builtin_table().find(name);
    if (it == builtin_table().end())
        throw std::runtime_error("unknown built-in run '" + name + "'");
    return it->second;
}

} // namespace axilab
