#include "axilab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace axilab {

double Grid::z_distance(double a, double b) const {
    double d = std::fmod(std::abs(a - b), z_len);
    return std::min(d, z_len - d);
}

Grid make_grid(int nr, int nz, double r_max, double z_len, int ghost_layers) {
    if (nr < 8 || nz < 8)
        throw std::invalid_argument("make_grid: mesh undersized, need nr, nz >= 8");
    if (!(r_max > 0.0) || !(z_len > 0.0))
        throw std::invalid_argument("make_grid: domain extents must be positive");
    if (ghost_layers < 1)
        throw std::invalid_argument("make_grid: need at least one ghost layer");
    Grid g;
    g.nr = nr;
    g.nz = nz;
    g.r_max = r_max;
    g.z_len = z_len;
    g.dr = r_max / nr;
    g.dz = z_len / nz;
    g.ghost_layers = ghost_layers;
    return g;
}

ScalarField::ScalarField(const Grid& grid, Parity parity, double init)
    : grid_(grid), parity_(parity),
      values_(static_cast<std::size_t>(grid.nr + 2 * grid.ghost_layers) * grid.nz, init) {
    if (grid.nr == 0) throw std::invalid_argument("ScalarField: uninitialized grid");
}

ScalarField ScalarField::from_function(const Grid& grid, Parity parity,
                                       const std::function<double(double, double)>& f) {
    ScalarField out(grid, parity);
    const int g = grid.ghost_layers;
    for (int i = -g; i < grid.nr + g; ++i)
        for (int j = 0; j < grid.nz; ++j)
            out.at(i, j) = f(grid.radius(i), grid.axial(j));
    return out;
}

void ScalarField::fill_axis_ghosts() {
    const double sign = (parity_ == Parity::even) ? 1.0 : -1.0;
    for (int k = 0; k < grid_.ghost_layers; ++k)
        for (int j = 0; j < grid_.nz; ++j)
            at(-1 - k, j) = sign * at(k, j);
}

void ScalarField::fill_outer_ghosts_dirichlet_zero() {
    for (int k = 0; k < grid_.ghost_layers; ++k)
        for (int j = 0; j < grid_.nz; ++j)
            at(grid_.nr + k, j) = -at(grid_.nr - 1 - k, j);
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < grid_.nr; ++i)
        for (int j = 0; j < grid_.nz; ++j)
            m = std::max(m, std::abs(at(i, j)));
    return m;
}

double ScalarField::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_.nr; ++i)
        for (int j = 0; j < grid_.nz; ++j)
            m = std::max(m, at(i, j));
    return m;
}

double ScalarField::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_.nr; ++i)
        for (int j = 0; j < grid_.nz; ++j)
            m = std::min(m, at(i, j));
    return m;
}

bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

VectorFieldCyl::VectorFieldCyl(const Grid& grid)
    : vr(grid, Parity::odd), vtheta(grid, Parity::odd), vz(grid, Parity::even) {}

void VectorFieldCyl::fill_axis_ghosts() {
    vr.fill_axis_ghosts();
    vtheta.fill_axis_ghosts();
    vz.fill_axis_ghosts();
}

double VectorFieldCyl::max_speed() const {
    const Grid& g = grid();
    double m = 0.0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double a = vr.at(i, j), b = vtheta.at(i, j), c = vz.at(i, j);
            m = std::max(m, std::sqrt(a * a + b * b + c * c));
        }
    return m;
}

bool VectorFieldCyl::all_finite() const {
    return vr.all_finite() && vtheta.all_finite() && vz.all_finite();
}

ScalarField axis_fill(const ScalarField& field) {
    ScalarField out = field;
    out.fill_axis_ghosts();
    return out;
}

double interpolate(const ScalarField& field, double r, double z) {
    const Grid& g = field.grid();
    if (r < 0.0 || r >= g.r_max)
        throw std::domain_error("interpolate: radius outside [0, r_max)");
    const double a = r / g.dr - 0.5;
    const double b = z / g.dz - 0.5;
    const int i0 = static_cast<int>(std::floor(a));
    const int j0 = static_cast<int>(std::floor(b));
    const double wa = a - i0;
    const double wb = b - j0;
    const double f00 = field.at(i0, j0), f10 = field.at(i0 + 1, j0);
    const double f01 = field.at(i0, j0 + 1), f11 = field.at(i0 + 1, j0 + 1);
    return (1.0 - wa) * ((1.0 - wb) * f00 + wb * f01) + wa * ((1.0 - wb) * f10 + wb * f11);
}

double ball_integral(const ScalarField& field, double R, double p, double z0) {
    const Grid& g = field.grid();
    if (!(R > 0.0) || R > std::min(g.r_max, 0.5 * g.z_len) + 1e-12)
        throw std::domain_error("ball_integral: R must lie in (0, min(r_max, z_len/2)]");
    if (!(p > 0.0))
        throw std::invalid_argument("ball_integral: exponent must be positive");
    const double R2 = R * R;
    const double two_pi = 2.0 * std::acos(-1.0);
    double sum = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        if (r * r > R2) break;
        for (int j = 0; j < g.nz; ++j) {
            const double dzp = g.z_distance(g.axial(j), z0);
            if (r * r + dzp * dzp <= R2)
                sum += std::pow(std::abs(field.at(i, j)), p) * r;
        }
    }
    return sum * two_pi * g.dr * g.dz;
}

} // namespace axilab
