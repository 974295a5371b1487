// Axisymmetric Navier-Stokes with swirl, evolved by an explicit projection
// step: upwind advection by b = (v^r, v^z), reaction terms +- v^theta
// coupling, centered viscous terms (Delta - 1/r^2 on v^r, v^theta; Delta on
// v^z), then projection of (v^r, v^z) onto the kernel of the measured
// centered divergence.
//
// The projection pressure solves the composed operator div(grad p) built from
// the same wide centered stencils and ghost closures the divergence invariant
// is measured with, reduced to a banded real system per periodic z-mode and
// factored once at solver construction. Solving the composed operator rather
// than the compact 5-point Laplacian is what drives the post-projection
// divergence to roundoff instead of truncation order.
#pragma once

#include "axilab/drift.hpp"
#include "axilab/gamma_solver.hpp"
#include "axilab/grid.hpp"

#include <memory>
#include <string>
#include <vector>

namespace axilab {

struct NSState {
    VectorFieldCyl velocity;
    ScalarField pressure; // even parity, zero weighted mean
    double time = 0.0;
};

struct PoissonSolveConfig {
    double rel_tol = 1e-10;
    int max_iterations = 20000;
};

struct NSStepInfo {
    int poisson_iterations = 0;
    double divergence_residual = 0.0;
};

class NSSolver {
public:
    struct Options {
        // dirichlet_zero realizes the no-slip wall; fixed holds the initial
        // ghost data (driven wall) and needs set_fixed_boundary().
        OuterBc outer_bc = OuterBc::dirichlet_zero;
        double cfl = 0.4;
    };

    explicit NSSolver(const Grid& grid);
    NSSolver(const Grid& grid, Options options);
    ~NSSolver();
    NSSolver(NSSolver&&) noexcept;
    NSSolver& operator=(NSSolver&&) noexcept;

    // Captures ghost-ring velocity data and the wall pressure slope from the
    // initial state; required when outer_bc == OuterBc::fixed.
    void set_fixed_boundary(const NSState& initial);

    double stability_limit(const NSState& state) const;

    NSState step(const NSState& state, double dt, NSStepInfo* info = nullptr) const;

    const Grid& grid() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Compact axisymmetric Poisson solve (d_r^2 + (1/r) d_r + d_z^2) p = rhs with
// the zero-flux axis closure, homogeneous Neumann wall, periodic z; plain
// conjugate gradients in the r-weighted inner product; zero-mean gauge. The
// weighted mean of rhs (the compatibility residual) is subtracted first.
ScalarField pressure_poisson(const ScalarField& rhs, const PoissonSolveConfig& cfg,
                             int* iterations = nullptr);

// Gamma = r v^theta, even parity, evaluated on interior and ghost cells.
ScalarField compute_gamma(const NSState& state);

// The radial-axial drift (v^r, 0, v^z).
VectorFieldCyl compute_b(const NSState& state);

// Stream component B_theta with curl(B_theta e_theta) closest to (v^r, v^z)
// in the weighted least-squares sense (CGLS); the residual is O(h^2) for
// discretely divergence-free input. Gauge: psi = r B_theta vanishes on the
// axis, zero closure past the wall.
ScalarField compute_stream(const NSState& state, const PoissonSolveConfig& cfg = {},
                           int* iterations = nullptr);

struct NSStepStats {
    double t = 0.0;
    double kinetic_energy = 0.0;
    double max_speed = 0.0;
    double max_gamma = 0.0;
    double divergence_residual = 0.0;
    int poisson_iterations = 0;
};

struct NSRunConfig {
    double end_time = 0.0;
    double dt = 0.0; // 0 selects the CFL-derived step
    double cfl = 0.4;
    double snapshot_dt = 0.0;
    NSSolver::Options options;
};

struct NSRunResult {
    VectorTrajectory trajectory;
    std::vector<NSStepStats> stats;
    double dt = 0.0;
};

NSRunResult run_ns(const NSState& initial, const NSRunConfig& config);

double kinetic_energy(const VectorFieldCyl& v);

void write_ns_step_csv(const std::string& path, const std::vector<NSStepStats>& stats);

} // namespace axilab
