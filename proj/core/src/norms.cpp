#include "axilab/norms.hpp"

#include "axilab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace axilab {
namespace {

const double kPi = std::acos(-1.0);

ScalarField squared_magnitude(const VectorFieldCyl& b) {
    const Grid& g = b.grid();
    ScalarField out(g, Parity::even);
    const int ring = g.ghost_layers;
    for (int i = -ring; i < g.nr + ring; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double a = b.vr.at(i, j), c = b.vz.at(i, j);
            out.at(i, j) = a * a + c * c;
        }
    return out;
}

double hollowed_energy_at_scale(const ScalarField& b_sq, double R, double z0) {
    return (ball_integral(b_sq, 2.0 * R, 1.0, z0) - ball_integral(b_sq, R / 8.0, 1.0, z0)) / R;
}

// theta-arc of the circle {radius r, height dz from center plane} inside the
// ball of radius rho centered at cylindrical radius cr.
double arc_inside(double r, double dz, double cr, double rho) {
    const double rho2 = rho * rho;
    if (cr == 0.0)
        return (r * r + dz * dz <= rho2) ? 2.0 * kPi : 0.0;
    const double gamma = (r * r + cr * cr + dz * dz - rho2) / (2.0 * r * cr);
    if (gamma >= 1.0) return 0.0;
    if (gamma <= -1.0) return 2.0 * kPi;
    return 2.0 * std::acos(gamma);
}

struct BallFamilyStats {
    double mean = 0.0;
    double mean_abs_dev = 0.0;
    double volume = 0.0;
};

BallFamilyStats ball_stats(const ScalarField& B, double cr, double cz, double rho) {
    const Grid& g = B.grid();
    BallFamilyStats s;
    const int i_hi = std::min(g.nr, static_cast<int>(std::ceil((cr + rho) / g.dr)) + 1);
    double wsum = 0.0, fsum = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < i_hi; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            const double dzp = g.z_distance(g.axial(j), cz);
            if (dzp > rho) continue;
            const double arc = arc_inside(r, dzp, cr, rho);
            if (arc <= 0.0) continue;
            const double w = r * arc * g.dr * g.dz;
            wsum += w;
            fsum += w * B.at(i, j);
            lo = std::min(lo, B.at(i, j));
            hi = std::max(hi, B.at(i, j));
        }
    }
    if (wsum <= 0.0) return s;
    if (lo == hi) { // constant on the ball, oscillation exactly zero
        s.volume = wsum;
        s.mean = lo;
        return s;
    }
    s.volume = wsum;
    s.mean = fsum / wsum;
    double dev = 0.0;
    for (int i = 0; i < i_hi; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            const double dzp = g.z_distance(g.axial(j), cz);
            if (dzp > rho) continue;
            const double arc = arc_inside(r, dzp, cr, rho);
            if (arc <= 0.0) continue;
            dev += r * arc * g.dr * g.dz * std::abs(B.at(i, j) - s.mean);
        }
    }
    s.mean_abs_dev = dev / wsum;
    return s;
}

} // namespace

std::vector<double> DyadicScaleSet::radii() const {
    std::vector<double> out;
    double R = r0;
    for (int j = 0; j <= levels; ++j, R *= 0.5) out.push_back(R);
    return out;
}

double DyadicScaleSet::finest() const { return r0 * std::pow(0.5, levels); }

DyadicScaleSet make_dyadic_scales(double r0, int levels) {
    if (!(r0 > 0.0)) throw std::invalid_argument("make_dyadic_scales: r0 must be positive");
    if (levels < 3) throw std::invalid_argument("make_dyadic_scales: need at least levels = 3");
    return DyadicScaleSet{r0, levels};
}

void validate_scales(const DyadicScaleSet& scales, const Grid& grid) {
    if (scales.r0 > grid.r_max / 4.0 + 1e-12)
        throw std::invalid_argument("scale set leaves the diagnostic-safe region r <= r_max / 4");
    if (scales.r0 > 0.5 * grid.z_len)
        throw std::invalid_argument("scale set exceeds the periodic z half-extent");
}

double hollowed_scaled_energy(const VectorFieldCyl& b1, const DyadicScaleSet& scales, double z0) {
    const ScalarField b_sq = squared_magnitude(b1);
    double sup = 0.0;
    for (double R : scales.radii()) sup = std::max(sup, hollowed_energy_at_scale(b_sq, R, z0));
    return sup;
}

double hollowed_scaled_energy(const VectorTrajectory& b1, const DyadicScaleSet& scales,
                              double z0, double t0) {
    double sup = 0.0;
    for (double R : scales.radii()) {
        const auto idx = b1.indices_in(t0 - R * R, t0);
        if (idx.empty() || b1.t_front() > t0 - R * R + 1e-12)
            throw std::runtime_error("hollowed_scaled_energy: trajectory does not cover (t0 - R^2, t0]");
        for (std::size_t k : idx) {
            const ScalarField b_sq = squared_magnitude(b1.snapshot(k));
            sup = std::max(sup, hollowed_energy_at_scale(b_sq, R, z0));
        }
    }
    return sup;
}

double bmo_seminorm(const ScalarField& B) {
    const Grid& g = B.grid();
    const double rho_max = 0.5 * std::min(g.r_max, 0.5 * g.z_len);
    const double rho_min = 4.0 * std::max(g.dr, g.dz);
    const double center_step = std::max(rho_max / 2.0, 2.0 * rho_min);

    struct Ball {
        double rho, cr, cz;
    };
    std::vector<Ball> family;
    for (double rho = rho_max; rho >= rho_min; rho *= 0.5)
        for (double cr = 0.0; cr + rho <= g.r_max + 1e-12; cr += center_step)
            for (double cz = 0.5 * g.dz; cz < g.z_len; cz += center_step)
                family.push_back({rho, cr, cz});

    // fixed task order with per-slot writes keeps the sup bit-identical for
    // any AXILAB_THREADS setting
    std::vector<double> osc(family.size(), 0.0);
    parallel_for_index(family.size(), [&](std::size_t k) {
        osc[k] = ball_stats(B, family[k].cr, family[k].cz, family[k].rho).mean_abs_dev;
    });
    double sup = 0.0;
    for (double v : osc) sup = std::max(sup, v);
    return sup;
}

double sup_r_abs(const VectorFieldCyl& b3) {
    const Grid& g = b3.grid();
    double sup = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            const double a = b3.vr.at(i, j), c = b3.vz.at(i, j);
            sup = std::max(sup, r * std::sqrt(a * a + c * c));
        }
    }
    return sup;
}

ENormReport e_norm(const DriftDecomposition& b, const DyadicScaleSet& scales, double z0) {
    ENormReport rep;
    if (b.b1) rep.hse = hollowed_scaled_energy(*b.b1, scales, z0);
    if (b.stream_B) rep.bmo = bmo_seminorm(*b.stream_B);
    if (b.b3) rep.sup_rb3 = sup_r_abs(*b.b3);
    rep.total = rep.hse + rep.bmo + rep.sup_rb3;
    return rep;
}

OscillationProfile oscillation_profile(const ScalarTrajectory& traj, const DyadicScaleSet& scales,
                                       double z0, double t0) {
    if (traj.empty()) throw std::invalid_argument("oscillation_profile: empty trajectory");
    OscillationProfile prof;
    for (double R : scales.radii()) {
        const ParabolicCylinder cyl{z0, R, t0};
        if (!traj.covers(cyl))
            throw std::runtime_error("oscillation_profile: trajectory does not cover P(R)");
        const Grid& g = traj.snapshot(0).grid();
        const auto idx = traj.indices_in(cyl.t_begin(), cyl.t0);
        OscillationEntry e;
        e.R = R;
        e.snapshots = static_cast<long>(idx.size());
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        long cells = 0;
        for (int i = 0; i < g.nr; ++i) {
            const double r = g.radius(i);
            if (r > R) break;
            for (int j = 0; j < g.nz; ++j) {
                const double dzp = g.z_distance(g.axial(j), z0);
                if (r * r + dzp * dzp > R * R) continue;
                ++cells;
                for (std::size_t k : idx) {
                    const double v = traj.snapshot(k).at(i, j);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
        }
        e.plane_cells = cells;
        if (cells == 0 || idx.empty()) {
            e.m = e.M = e.J = 0.0;
        } else {
            e.m = lo;
            e.M = hi;
            e.J = hi - lo;
        }
        prof.entries.push_back(e);
    }
    return prof;
}

HolderFit holder_fit(const OscillationProfile& profile) {
    std::vector<std::pair<double, double>> pts; // (log R, log J)
    bool any_positive = false;
    for (const auto& e : profile.entries) {
        if (e.J > 0.0) any_positive = true;
        // thin cylinders carry resolution noise, not scaling information
        if (e.J > 0.0 && e.plane_cells >= 16 && e.snapshots >= 4)
            pts.emplace_back(std::log(e.R), std::log(e.J));
    }
    if (!any_positive) {
        HolderFit f;
        f.alpha = std::numeric_limits<double>::infinity();
        return f;
    }
    if (pts.size() < 3)
        throw std::runtime_error("holder_fit: fewer than 3 usable scales");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    HolderFit f;
    f.alpha = (n * sxy - sx * sy) / denom;
    f.log_c = (sy - f.alpha * sx) / n;
    double ss = 0.0;
    for (auto [x, y] : pts) {
        const double r = y - (f.alpha * x + f.log_c);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    f.used_scales = static_cast<int>(pts.size());
    return f;
}

double ball_mean(const ScalarField& B, double R, double z0) {
    const double vol = ball_integral(ScalarField::from_function(B.grid(), Parity::even,
                                                                [](double, double) { return 1.0; }),
                                     R, 1.0, z0);
    if (vol <= 0.0) throw std::runtime_error("ball_mean: empty ball");
    const Grid& g = B.grid();
    double sum = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        if (r > R) break;
        for (int j = 0; j < g.nz; ++j) {
            const double dzp = g.z_distance(g.axial(j), z0);
            if (r * r + dzp * dzp <= R * R) sum += B.at(i, j) * r;
        }
    }
    return sum * 2.0 * kPi * g.dr * g.dz / vol;
}

double john_nirenberg_ratio(const ScalarField& B, double p, double R, double z0) {
    const double bmo = bmo_seminorm(B);
    if (bmo <= 0.0)
        throw std::domain_error("john_nirenberg_ratio: BMO seminorm vanishes, ratio undefined");
    const Grid& g = B.grid();
    const double mean = ball_mean(B, R, z0);
    double lp = 0.0, vol = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        if (r > R) break;
        for (int j = 0; j < g.nz; ++j) {
            const double dzp = g.z_distance(g.axial(j), z0);
            if (r * r + dzp * dzp > R * R) continue;
            const double w = r * 2.0 * kPi * g.dr * g.dz;
            lp += w * std::pow(std::abs(B.at(i, j) - mean), p);
            vol += w;
        }
    }
    return std::pow(lp, 1.0 / p) / (bmo * std::pow(vol, 1.0 / p));
}

} // namespace axilab
