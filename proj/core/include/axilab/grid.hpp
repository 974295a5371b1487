// Discrete geometry for the axisymmetric (r, z) half-plane: uniform
// cell-centered mesh, parity-aware scalar/vector fields, snapshot
// trajectories and parabolic cylinders.
//
// Cells are centered at r_i = (i + 1/2) dr so no unknown sits on the axis;
// ghost rings extend to negative signed radii and past the outer wall.
// z is periodic everywhere, handled by index wrapping.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace axilab {

struct Grid {
    int nr = 0;
    int nz = 0;
    double r_max = 0.0;
    double z_len = 0.0;
    double dr = 0.0;
    double dz = 0.0;
    int ghost_layers = 2;

    // Signed cell-center radius; valid for ghost indices (i < 0 gives r < 0).
    double radius(int i) const { return (i + 0.5) * dr; }
    double axial(int j) const { return (j + 0.5) * dz; }

    // Minimal-image axial distance on the periodic direction.
    double z_distance(double a, double b) const;

    int wrap_z(int j) const {
        int m = j % nz;
        return m < 0 ? m + nz : m;
    }

    bool same_layout(const Grid& o) const {
        return nr == o.nr && nz == o.nz && r_max == o.r_max && z_len == o.z_len;
    }
};

// Validates sizes (nr, nz >= 8, positive extents) and fills spacings.
Grid make_grid(int nr, int nz, double r_max, double z_len, int ghost_layers = 2);

enum class Parity : std::uint8_t { even = 0, odd = 1 };

// Gridded scalar sample with radial ghost rings on both sides of the
// interior band i in [0, nr). Value semantics; cheap to copy at desk scale.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(const Grid& grid, Parity parity, double init = 0.0);

    // Samples f(r, z) on interior cells and on every ghost ring using the
    // signed ghost radius, so analytic extensions stay exact across r = 0
    // and past the outer wall.
    static ScalarField from_function(const Grid& grid, Parity parity,
                                     const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    Parity parity() const { return parity_; }

    double& at(int i, int j) { return values_[index(i, j)]; }
    double at(int i, int j) const { return values_[index(i, j)]; }

    // Mirrors ghost values across r = 0 with the parity sign; interior and
    // outer-wall ghosts untouched.
    void fill_axis_ghosts();

    // Outer ghosts g_k = -mirror(interior), which places a zero value on the
    // wall face r = r_max under linear interpolation.
    void fill_outer_ghosts_dirichlet_zero();

    double max_abs() const;
    double max_value() const;
    double min_value() const;
    bool all_finite() const;

    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

private:
    std::size_t index(int i, int j) const {
        const int g = grid_.ghost_layers;
#ifndef NDEBUG
        if (i < -g || i >= grid_.nr + g) throw std::out_of_range("ScalarField: radial index");
#endif
        return static_cast<std::size_t>(i + g) * grid_.nz + grid_.wrap_z(j);
    }

    Grid grid_{};
    Parity parity_ = Parity::even;
    std::vector<double> values_;
};

// Cylindrical-component triple (v^r, v^theta, v^z) with parities (odd, odd, even).
struct VectorFieldCyl {
    ScalarField vr;
    ScalarField vtheta;
    ScalarField vz;

    VectorFieldCyl() = default;
    explicit VectorFieldCyl(const Grid& grid);

    const Grid& grid() const { return vr.grid(); }
    void fill_axis_ghosts();
    double max_speed() const;
    bool all_finite() const;
};

// Returns a copy with axis ghosts refreshed from the declared parity.
ScalarField axis_fill(const ScalarField& field);

// Bilinear interpolation on cell centers. Requires r in [0, r_max); z is
// wrapped periodically. Exact for fields of the form a + b r + c z + d r z
// when ghosts carry the analytic extension.
double interpolate(const ScalarField& field, double r, double z);

// Integral of |f|^p over the 3D ball r^2 + (z - z0)^2 <= R^2 centered on the
// axis, computed as a midpoint sum with cylindrical measure 2 pi r dr dz and
// cell-center membership. Requires R <= min(r_max, z_len / 2).
double ball_integral(const ScalarField& field, double R, double p, double z0);

// Space-time neighborhood B_R x (t0 - R^2, t0] anchored at (r0=0, z0, t0).
struct ParabolicCylinder {
    double z0 = 0.0;
    double radius = 0.0;
    double t0 = 0.0;

    double t_begin() const { return t0 - radius * radius; }
    bool contains_time(double t) const { return t > t_begin() && t <= t0 + 1e-12 * (1.0 + std::abs(t0)); }
};

// Ordered snapshot stack at (approximately) uniform cadence.
template <class FieldT>
class Trajectory {
public:
    using FieldPtr = std::shared_ptr<const FieldT>;

    Trajectory() = default;

    void append(double t, FieldPtr field) {
        if (!field) throw std::invalid_argument("Trajectory: null snapshot");
        if (!times_.empty() && t <= times_.back())
            throw std::invalid_argument("Trajectory: times must increase strictly");
        times_.push_back(t);
        snapshots_.push_back(std::move(field));
    }
    void append(double t, FieldT field) { append(t, std::make_shared<const FieldT>(std::move(field))); }

    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    double time(std::size_t k) const { return times_.at(k); }
    const FieldT& snapshot(std::size_t k) const { return *snapshots_.at(k); }
    FieldPtr snapshot_ptr(std::size_t k) const { return snapshots_.at(k); }
    const std::vector<double>& times() const { return times_; }

    double t_front() const { return times_.front(); }
    double t_back() const { return times_.back(); }

    // Uniform-cadence check with a relative tolerance on step variation.
    bool uniform_cadence(double rel_tol = 1e-6) const;

    // Indices with time(k) in (window_begin, window_end].
    std::vector<std::size_t> indices_in(double window_begin, double window_end) const;

    bool covers(const ParabolicCylinder& p) const {
        return !empty() && t_front() <= p.t_begin() + 1e-12 && t_back() >= p.t0 - 1e-12;
    }

private:
    std::vector<double> times_;
    std::vector<FieldPtr> snapshots_;
};

using ScalarTrajectory = Trajectory<ScalarField>;
using VectorTrajectory = Trajectory<VectorFieldCyl>;

template <class FieldT>
bool Trajectory<FieldT>::uniform_cadence(double rel_tol) const {
    if (times_.size() < 3) return true;
    const double step0 = times_[1] - times_[0];
    for (std::size_t k = 2; k < times_.size(); ++k) {
        const double s = times_[k] - times_[k - 1];
        if (std::abs(s - step0) > rel_tol * std::max(std::abs(step0), 1e-300)) return false;
    }
    return true;
}

template <class FieldT>
std::vector<std::size_t> Trajectory<FieldT>::indices_in(double window_begin, double window_end) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < times_.size(); ++k) {
        const double pad = 1e-12 * (1.0 + std::abs(window_end));
        if (times_[k] > window_begin - pad && times_[k] <= window_end + pad) out.push_back(k);
    }
    return out;
}

} // namespace axilab
