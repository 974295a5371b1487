// Named initial conditions and the shipped run configurations.
#pragma once

#include "axilab/config.hpp"
#include "axilab/grid.hpp"
#include "axilab/ns_solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace axilab {

// Gamma initial data. Presets:
//   "zero"  -- identically zero
//   "r2"    -- Gamma = r^2 (exact steady state; pair with outer_bc = fixed)
//   "bump"  -- compact r^2-type bump in r times a periodic cosine bump in z
ScalarField make_gamma_initial(const std::string& preset, const Grid& grid,
                               const std::map<std::string, double>& params);

// Navier-Stokes initial states. Presets:
//   "zero"           -- rest
//   "rigid_rotation" -- v_theta = Omega r with the balancing pressure
//                       (pair with outer_bc = fixed)
//   "swirl_decay"    -- tapered swirl column with an axial modulation,
//                       vanishing toward the wall (no-slip compatible)
NSState make_ns_initial(const std::string& preset, const Grid& grid,
                        const std::map<std::string, double>& params);

// Choosing the outer ghost policy the preset was designed for.
OuterBc preset_outer_bc(const std::string& preset, const std::string& requested);

bool is_builtin_run(const std::string& name);
std::vector<std::string> builtin_run_names();

// Full config text of a shipped scenario, parseable by Config::parse_string.
std::string builtin_run_text(const std::string& name);

} // namespace axilab
