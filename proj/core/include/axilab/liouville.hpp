// Rescaling and classification diagnostics for near-singular sequences:
// candidate selection by running-maximum speed, the zoom transform
// v -> (1/Q) v(x_k + x/Q, t_k + t/Q^2) sampled on an offset box around the
// anchor, and the residuals that measure how close a rescaled window is to
// the swirl-free / planar / spatially-constant ancient profiles.
//
// Desk-scale trajectories have no genuine singularity; these tools validate
// the transform laws and invariances on smooth sources.
#pragma once

#include "axilab/grid.hpp"
#include "axilab/verifier.hpp"

#include <memory>
#include <vector>

namespace axilab {

struct BlowupCandidate {
    double r_k = 0.0;
    double z_k = 0.0;
    double t_k = 0.0;
    double Q_k = 0.0;     // speed at the candidate point
    double gamma_k = 0.0; // Q_k relative to the running historical max
    std::size_t snapshot_index = 0;
};

// Scans snapshots in time order and emits a candidate whenever the snapshot
// maximum strictly exceeds every earlier one and clears gamma_min of the
// running max; ties inside a snapshot break lexicographically in (r, z).
// A zero trajectory yields an empty list.
std::vector<BlowupCandidate> select_candidates(const VectorTrajectory& traj, double gamma_min);

// Sampled zoom window. The target grid prescribes resolution and half-extents
// of the offset box: radial offsets xi span (-r_max, r_max) in 2 nr cells and
// axial offsets span (-z_len/2, z_len/2) in nz cells, both around the anchor.
// Offsets map to source points (r_k + xi / Q, z_k + zeta / Q); negative mapped
// radii sample the opposite ray with the component parities.
class RescaledTrajectory {
public:
    RescaledTrajectory(std::shared_ptr<const VectorTrajectory> source, BlowupCandidate candidate,
                       const Grid& target, double window);

    const BlowupCandidate& candidate() const { return candidate_; }
    const VectorTrajectory& source() const { return *source_; }

    int n_xi() const { return n_xi_; }
    int n_zeta() const { return n_zeta_; }
    std::size_t snapshots() const { return times_.size(); }

    double xi(int i) const { return (i + 0.5) * dxi_ - xi_half_; }
    double zeta(int j) const { return (j + 0.5) * dzeta_ - zeta_half_; }
    double time(std::size_t m) const { return times_.at(m); } // rescaled tau <= 0

    // rescaled cylindrical components (already divided by Q)
    double vr(std::size_t m, int i, int j) const { return samples_[offset(m, i, j) * 3 + 0]; }
    double vtheta(std::size_t m, int i, int j) const { return samples_[offset(m, i, j) * 3 + 1]; }
    double vz(std::size_t m, int i, int j) const { return samples_[offset(m, i, j) * 3 + 2]; }

    // signed source radius the sample was pulled from
    double source_radius(int i) const { return candidate_.r_k + xi(i) / candidate_.Q_k; }

    double sup_speed() const { return sup_speed_; }
    double center_speed() const { return center_speed_; }

private:
    std::size_t offset(std::size_t m, int i, int j) const {
        return (m * n_xi_ + i) * n_zeta_ + j;
    }

    std::shared_ptr<const VectorTrajectory> source_;
    BlowupCandidate candidate_;
    int n_xi_ = 0, n_zeta_ = 0;
    double dxi_ = 0.0, dzeta_ = 0.0, xi_half_ = 0.0, zeta_half_ = 0.0;
    std::vector<double> times_;
    std::vector<double> samples_;
    double sup_speed_ = 0.0;
    double center_speed_ = 0.0;
};

RescaledTrajectory rescale(std::shared_ptr<const VectorTrajectory> traj, const BlowupCandidate& c,
                           const Grid& target, double window);

// sup of the rescaled swirl component against C / (Q_k r_k); exactly zero for
// swirl-free sources, vacuous for axis anchors (the bound degenerates).
VerifierEntry swirl_residual(const RescaledTrajectory& traj, double gamma_bound);

// Volume-normalized L2 norm of the directional derivative of the rescaled
// field along nu_perp = e_theta(x_k), computed by central differences of the
// reconstructed Cartesian field at theta-displaced sample points.
double planar_residual(const RescaledTrajectory& traj);

// Sum over components of the per-snapshot spatial standard deviation,
// maximized over snapshots.
double constancy_residual(const RescaledTrajectory& traj);

struct MeanValueReport {
    double laplacian_max = 0.0; // max |Lap B| over the checked interior
    bool harmonic = false;      // laplacian_max below the threshold
    double center = 0.0;        // B extrapolated to (r = 0, z0)
    std::vector<std::pair<double, double>> defects; // (R, |ball avg - center|)
    double max_defect = 0.0;
};

// Compares axis-centered ball averages of B against its center value across
// dyadic radii; the discrete Laplacian residual decides whether the
// mean-value property should hold.
MeanValueReport harmonic_mean_value_check(const ScalarField& B, double z0,
                                          double harmonic_tol = 1e-8);

} // namespace axilab
