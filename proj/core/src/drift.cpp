#include "axilab/drift.hpp"

#include <cmath>

namespace axilab {
namespace {

void add_part(VectorFieldCyl& acc, const VectorFieldCyl& part) {
    auto& ar = acc.vr.raw();
    auto& az = acc.vz.raw();
    const auto& pr = part.vr.raw();
    const auto& pz = part.vz.raw();
    for (std::size_t k = 0; k < ar.size(); ++k) {
        ar[k] += pr[k];
        az[k] += pz[k];
    }
}

// Curl of B_theta e_theta on cells [-ring, nr+ring), so downstream centered
// stencils see genuine curl values in their ghost ring.
VectorFieldCyl discrete_curl(const ScalarField& B) {
    const Grid& g = B.grid();
    if (g.ghost_layers < 2)
        throw std::invalid_argument("discrete_curl: need two ghost layers on the stream function");
    VectorFieldCyl b(g);
    const int ring = g.ghost_layers - 1;
    for (int i = -ring; i < g.nr + ring; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            b.vr.at(i, j) = -(B.at(i, j + 1) - B.at(i, j - 1)) / (2.0 * g.dz);
            b.vz.at(i, j) = (g.radius(i + 1) * B.at(i + 1, j) - g.radius(i - 1) * B.at(i - 1, j)) /
                            (2.0 * g.dr * r);
        }
    }
    return b;
}

} // namespace

VectorFieldCyl DriftDecomposition::total() const {
    VectorFieldCyl sum(grid);
    if (b1) add_part(sum, *b1);
    if (b2) add_part(sum, *b2);
    if (b3) add_part(sum, *b3);
    return sum;
}

DriftDecomposition DriftDecomposition::zero(const Grid& grid) {
    DriftDecomposition d;
    d.grid = grid;
    return d;
}

DriftDecomposition make_b3_scaled(const Grid& grid, double c) {
    if (c < 0.0) throw std::invalid_argument("make_b3_scaled: amplitude must be nonnegative");
    DriftDecomposition d;
    d.grid = grid;
    VectorFieldCyl b(grid);
    // Signed ghost radii carry the analytic odd extension of c / r.
    b.vz = ScalarField::from_function(grid, Parity::even,
                                      [c](double r, double) { return c / r; });
    d.b3 = std::make_shared<const VectorFieldCyl>(std::move(b));
    return d;
}

DriftDecomposition make_b2_from_stream(const ScalarField& B_theta) {
    if (B_theta.parity() != Parity::odd)
        throw std::invalid_argument("make_b2_from_stream: stream function must have odd parity");
    DriftDecomposition d;
    d.grid = B_theta.grid();
    d.b2 = std::make_shared<const VectorFieldCyl>(discrete_curl(B_theta));
    d.stream_B = std::make_shared<const ScalarField>(B_theta);
    return d;
}

double b1_shell_stream(double amplitude, double R_in, double R_out, double z0,
                       double r, double z) {
    const double s = std::sqrt(r * r + (z - z0) * (z - z0));
    if (s <= R_in || s >= R_out) return 0.0;
    const double u = (s - R_in) / (R_out - R_in);
    const double w = u * (1.0 - u);
    return amplitude * r * 64.0 * w * w * w;
}

DriftDecomposition make_b1_shell(const Grid& grid, double amplitude, double R_in, double R_out,
                                 std::optional<double> z0_opt) {
    if (!(R_in > 0.0) || !(R_out > R_in) || R_out > grid.r_max)
        throw std::invalid_argument("make_b1_shell: need 0 < R_in < R_out <= r_max");
    const double z0 = z0_opt.value_or(0.5 * grid.z_len);
    ScalarField B = ScalarField::from_function(
        grid, Parity::odd,
        [=](double r, double z) { return b1_shell_stream(amplitude, R_in, R_out, z0, r, z); });
    DriftDecomposition d;
    d.grid = grid;
    d.b1 = std::make_shared<const VectorFieldCyl>(discrete_curl(B));
    return d;
}

DriftDecomposition compose(const DriftDecomposition& p1, const DriftDecomposition& p2,
                           const DriftDecomposition& p3) {
    const DriftDecomposition* parts[3] = {&p1, &p2, &p3};
    DriftDecomposition out;
    bool have_grid = false;
    for (const auto* p : parts) {
        if (p->empty()) continue;
        if (!have_grid) {
            out.grid = p->grid;
            have_grid = true;
        } else if (!out.grid.same_layout(p->grid)) {
            throw std::invalid_argument("compose: drift parts live on different grids");
        }
        if (p->b1) out.b1 = p->b1;
        if (p->b2) out.b2 = p->b2;
        if (p->b3) out.b3 = p->b3;
        if (p->stream_B) out.stream_B = p->stream_B;
    }
    if (!have_grid) out.grid = p1.grid;
    return out;
}

ScalarField divergence(const VectorFieldCyl& b) {
    const Grid& g = b.grid();
    ScalarField div(g, Parity::even);
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            const double radial = (g.radius(i + 1) * b.vr.at(i + 1, j) -
                                   g.radius(i - 1) * b.vr.at(i - 1, j)) /
                                  (2.0 * g.dr * r);
            const double axial = (b.vz.at(i, j + 1) - b.vz.at(i, j - 1)) / (2.0 * g.dz);
            div.at(i, j) = radial + axial;
        }
    }
    return div;
}

double max_abs_divergence(const VectorFieldCyl& b) {
    return divergence(b).max_abs();
}

DriftDecomposition DriftSpec::build(const Grid& grid) const {
    DriftDecomposition acc = DriftDecomposition::zero(grid);
    if (b1) acc = compose(acc, make_b1_shell(grid, b1->amplitude, b1->r_in, b1->r_out), DriftDecomposition::zero(grid));
    if (b2) {
        const double a = b2->amplitude;
        const double k = 2.0 * std::acos(-1.0) * b2->z_mode / grid.z_len;
        ScalarField B = ScalarField::from_function(
            grid, Parity::odd, [=](double r, double z) { return a * r * std::sin(k * z); });
        acc = compose(acc, make_b2_from_stream(B), DriftDecomposition::zero(grid));
    }
    if (b3) acc = compose(acc, make_b3_scaled(grid, b3->c), DriftDecomposition::zero(grid));
    return acc;
}

} // namespace axilab
