// Divergence-free radial-axial drift fields b = b1 + b2 + b3 with
// analytically known norm contributions:
//   b1 -- annular-shell field measured by the hollowed scaled energy,
//   b2 -- curl of a stream function B_theta e_theta, measured by BMO of B,
//   b3 -- (c / r) e_z, measured by sup r |b3|.
//
// b2 and b1 are built with the discrete curl below, and the discrete
// divergence is its exact algebraic annihilator, so their divergence
// vanishes to roundoff rather than to truncation order.
#pragma once

#include "axilab/grid.hpp"

#include <memory>
#include <optional>

namespace axilab {

struct DriftDecomposition {
    Grid grid;
    std::shared_ptr<const VectorFieldCyl> b1;
    std::shared_ptr<const VectorFieldCyl> b2;
    std::shared_ptr<const VectorFieldCyl> b3;
    std::shared_ptr<const ScalarField> stream_B; // theta stream component of b2

    bool empty() const { return !b1 && !b2 && !b3; }

    // Componentwise sum of the present parts (vtheta identically zero).
    VectorFieldCyl total() const;

    static DriftDecomposition zero(const Grid& grid);
};

// b3 = (c / r) e_z; r |b3| = c at every cell and the divergence vanishes
// identically because the field is z-independent.
DriftDecomposition make_b3_scaled(const Grid& grid, double c);

// b2 = curl(B_theta e_theta): b^r = -d_z B, b^z = (1/r) d_r (r B), centered
// differences evaluated one ghost ring deep so the discrete divergence of the
// result is exactly zero. B_theta must have odd parity and filled ghosts.
DriftDecomposition make_b2_from_stream(const ScalarField& B_theta);

// Divergence-free field supported in the spherical shell
// R_in < |x - (0,z0)| < R_out, built as the discrete curl of the compactly
// supported stream profile B_theta = amplitude * r * q((|x|-R_in)/(R_out-R_in))
// with q(u) = 64 u^3 (1-u)^3.
DriftDecomposition make_b1_shell(const Grid& grid, double amplitude, double R_in, double R_out,
                                 std::optional<double> z0 = std::nullopt);

// The analytic stream profile behind make_b1_shell, exposed for oracles and
// for rescaled-grid reconstructions.
double b1_shell_stream(double amplitude, double R_in, double R_out, double z0,
                       double r, double z);

// Merges parts (each argument may be an empty decomposition); parts are
// recorded separately so norms can be attributed per (1.1)-like structure.
DriftDecomposition compose(const DriftDecomposition& p1, const DriftDecomposition& p2,
                           const DriftDecomposition& p3);

// Discrete axisymmetric divergence d_r b^r + b^r / r + d_z b^z, evaluated in
// the conservative form (1/r) d_r(r b^r) + d_z b^z with centered differences
// and parity ghosts.
ScalarField divergence(const VectorFieldCyl& b);

double max_abs_divergence(const VectorFieldCyl& b);

// Named drift constructions as they appear in run-config files.
struct DriftSpec {
    struct B1Shell {
        double amplitude = 0.0;
        double r_in = 0.0;
        double r_out = 0.0;
    };
    struct B2Stream {
        double amplitude = 0.0;
        int z_mode = 1; // B_theta = amplitude * r * sin(2 pi z_mode z / z_len)
    };
    struct B3Scaled {
        double c = 0.0;
    };

    std::optional<B1Shell> b1;
    std::optional<B2Stream> b2;
    std::optional<B3Scaled> b3;

    DriftDecomposition build(const Grid& grid) const;
};

} // namespace axilab
