// Snapshot container format "AXNS": header (magic, version, component count,
// nr, nz, r_max, z_len as 8-byte floats, one parity byte per component)
// followed by row-major 8-byte float values for each component, interior
// cells only. Ghosts are rebuilt from parity on load.
#pragma once

#include "axilab/grid.hpp"

#include <string>

namespace axilab {

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_scalar_snapshot(const std::string& path, const ScalarField& field);
void write_vector_snapshot(const std::string& path, const VectorFieldCyl& field);

ScalarField read_scalar_snapshot(const std::string& path, int ghost_layers = 2);
VectorFieldCyl read_vector_snapshot(const std::string& path, int ghost_layers = 2);

// Plain (r, z, value) rows with a header line.
void write_scalar_csv(const std::string& path, const ScalarField& field);

} // namespace axilab
