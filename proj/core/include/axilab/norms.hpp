// Scale-invariant controlling quantities of the drift and oscillation
// moduli of Gamma over parabolic cylinders:
//
//   HSE(b1)   = sup_R sup_t (1/R) int_{B_2R \ B_R/8} |b1|^2 dx
//   BMO(B)    = sup over a finite dyadic ball family of mean |B - mean_B|
//   sup r|b3|, and their sum, the E-norm.
//
// The BMO sup runs over a documented finite family (lattice centers, dyadic
// radii down to four cells), so the estimator is a lower bound of the true
// seminorm; every claim downstream is about this estimator.
#pragma once

#include "axilab/drift.hpp"
#include "axilab/grid.hpp"

#include <vector>

namespace axilab {

struct DyadicScaleSet {
    double r0 = 0.0;
    int levels = 0; // radii r0 * 2^-j for j = 0..levels

    std::vector<double> radii() const;
    double finest() const;
};

// levels >= 3 so downstream fits see at least four scales.
DyadicScaleSet make_dyadic_scales(double r0, int levels);

// Checks the scale set against a grid: largest radius within the
// diagnostic-safe region r <= r_max / 4 and inside the periodic z extent.
void validate_scales(const DyadicScaleSet& scales, const Grid& grid);

struct ENormReport {
    double hse = 0.0;
    double bmo = 0.0;
    double sup_rb3 = 0.0;
    double total = 0.0;
};

// Hollowed scaled energy of a steady part.
double hollowed_scaled_energy(const VectorFieldCyl& b1, const DyadicScaleSet& scales, double z0);

// Trajectory version: sup over snapshots with t in (t0 - R^2, t0] per scale.
// Throws when the trajectory does not cover the deepest window.
double hollowed_scaled_energy(const VectorTrajectory& b1, const DyadicScaleSet& scales,
                              double z0, double t0);

// Finite-family BMO seminorm in the 3D cylindrical measure. Off-axis ball
// centers weight each (r, z) cell by the arc length of the theta-interval
// inside the ball.
double bmo_seminorm(const ScalarField& B);

double sup_r_abs(const VectorFieldCyl& b3);

ENormReport e_norm(const DriftDecomposition& b, const DyadicScaleSet& scales, double z0);

struct OscillationEntry {
    double R = 0.0;
    double m = 0.0; // inf over P(R)
    double M = 0.0; // sup over P(R)
    double J = 0.0; // M - m
    long plane_cells = 0;
    long snapshots = 0;
};

struct OscillationProfile {
    std::vector<OscillationEntry> entries; // coarse to fine
};

// Exact discrete inf/sup of Gamma over each parabolic cylinder
// P(R_j) = B_{R_j}(0, z0) x (t0 - R_j^2, t0].
OscillationProfile oscillation_profile(const ScalarTrajectory& traj, const DyadicScaleSet& scales,
                                       double z0, double t0);

struct HolderFit {
    double alpha = 0.0;
    double log_c = 0.0;
    double residual = 0.0;
    int used_scales = 0;
};

// Least-squares fit of log J_R against log R. Scales with J == 0 or with a
// cylinder thinner than ~4^3 space-time cells are excluded; an all-zero
// profile returns alpha = +infinity.
HolderFit holder_fit(const OscillationProfile& profile);

// || B - mean_{B_R} B ||_{L^p(B_R)} / ( bmo_seminorm(B) |B_R|^{1/p} ).
// Throws when the BMO estimator vanishes.
double john_nirenberg_ratio(const ScalarField& B, double p, double R, double z0);

// Mean of B over the axis-centered ball B_R(0, z0) in cylindrical measure.
double ball_mean(const ScalarField& B, double R, double z0);

} // namespace axilab
