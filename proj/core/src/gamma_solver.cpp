#include "axilab/gamma_solver.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace axilab {
namespace {

const double kTwoPi = 2.0 * std::acos(-1.0);

void apply_outer_bc(ScalarField& f, OuterBc bc, double t,
                    const std::function<double(double, double, double)>& wall_values) {
    const Grid& g = f.grid();
    switch (bc) {
        case OuterBc::dirichlet_zero:
            f.fill_outer_ghosts_dirichlet_zero();
            break;
        case OuterBc::fixed:
            break;
        case OuterBc::analytic:
            if (!wall_values)
                throw std::invalid_argument("OuterBc::analytic requires a wall_values function");
            for (int k = 0; k < g.ghost_layers; ++k)
                for (int j = 0; j < g.nz; ++j)
                    f.at(g.nr + k, j) = wall_values(g.radius(g.nr + k), g.axial(j), t);
            break;
    }
}

struct CflCheck {
    double limit = 0.0;
    int worst_i = 0, worst_j = 0;
    double worst_coeff = 0.0;
};

CflCheck cfl_check(const Grid& g, const VectorFieldCyl& b) {
    CflCheck c;
    // radial diffusion weights sum to 2/dr^2 at every cell; the extra 1/dr^2
    // covers the sign-flipped wall ghost of the Dirichlet closure
    const double diffusion = 3.0 / (g.dr * g.dr) + 2.0 / (g.dz * g.dz);
    double worst = 0.0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            const double a = std::abs(b.vr.at(i, j)) / g.dr + std::abs(b.vz.at(i, j)) / g.dz;
            if (a > worst) {
                worst = a;
                c.worst_i = i;
                c.worst_j = j;
            }
        }
    c.worst_coeff = diffusion + worst;
    c.limit = 1.0 / c.worst_coeff;
    return c;
}

ScalarField step_core(const ScalarField& gamma_in, double t, double dt,
                      const VectorFieldCyl& b, const ScalarField* forcing, OuterBc outer_bc,
                      const std::function<double(double, double, double)>& wall_values) {
    const Grid& g = gamma_in.grid();
    const CflCheck c = cfl_check(g, b);
    if (dt > c.limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step_gamma: dt = " << dt << " exceeds stability limit " << c.limit
            << " set by cell (i=" << c.worst_i << ", j=" << c.worst_j
            << ", r=" << g.radius(c.worst_i) << ", z=" << g.axial(c.worst_j) << ")";
        throw CflViolation(msg.str());
    }

    ScalarField work = gamma_in;
    work.fill_axis_ghosts();
    apply_outer_bc(work, outer_bc, t, wall_values);

    ScalarField next = work; // ghosts carried over; interior overwritten
    const double idr2 = 1.0 / (g.dr * g.dr);
    const double idz2 = 1.0 / (g.dz * g.dz);
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        const double cp = idr2 - 1.0 / (2.0 * r * g.dr); // weight of Gamma_{i+1}
        const double cm = idr2 + 1.0 / (2.0 * r * g.dr); // weight of Gamma_{i-1}
        for (int j = 0; j < g.nz; ++j) {
            const double here = work.at(i, j);
            double rate = cp * work.at(i + 1, j) + cm * work.at(i - 1, j) - 2.0 * idr2 * here +
                          (work.at(i, j + 1) - 2.0 * here + work.at(i, j - 1)) * idz2;
            const double u = b.vr.at(i, j);
            rate -= u > 0.0 ? u * (here - work.at(i - 1, j)) / g.dr
                            : u * (work.at(i + 1, j) - here) / g.dr;
            const double w = b.vz.at(i, j);
            rate -= w > 0.0 ? w * (here - work.at(i, j - 1)) / g.dz
                            : w * (work.at(i, j + 1) - here) / g.dz;
            if (forcing) rate += forcing->at(i, j);
            next.at(i, j) = here + dt * rate;
        }
    }
    return next;
}

VectorFieldCyl drift_total_or_zero(const GammaState& s) {
    if (s.drift && !s.drift->empty()) return s.drift->total();
    return VectorFieldCyl(s.gamma.grid());
}

} // namespace

double gamma_stability_limit(const Grid& grid, const VectorFieldCyl& drift_total) {
    return cfl_check(grid, drift_total).limit;
}

GammaState step_gamma(const GammaState& state, double dt, OuterBc outer_bc,
                      const std::function<double(double, double, double)>& wall_values) {
    GammaState out = state;
    out.gamma = step_core(state.gamma, state.time, dt, drift_total_or_zero(state), nullptr,
                          outer_bc, wall_values);
    out.time = state.time + dt;
    return out;
}

GammaState step_gamma_forced(const GammaState& state, double dt, const ScalarField& forcing,
                             OuterBc outer_bc,
                             const std::function<double(double, double, double)>& wall_values) {
    GammaState out = state;
    out.gamma = step_core(state.gamma, state.time, dt, drift_total_or_zero(state), &forcing,
                          outer_bc, wall_values);
    out.time = state.time + dt;
    return out;
}

GammaRunResult run_gamma(const GammaState& initial, const GammaRunConfig& config) {
    if (!(config.end_time > 0.0)) throw std::invalid_argument("run_gamma: end_time must be positive");
    if (!initial.gamma.all_finite()) throw std::invalid_argument("run_gamma: initial data not finite");

    const Grid& g = initial.gamma.grid();
    const VectorFieldCyl b = drift_total_or_zero(initial);

    double dt = config.dt;
    if (dt <= 0.0) dt = config.cfl * gamma_stability_limit(g, b);
    const long nsteps = std::max(1L, static_cast<long>(std::ceil(config.end_time / dt - 1e-9)));
    dt = config.end_time / static_cast<double>(nsteps);

    long snap_every = 1;
    if (config.snapshot_dt > 0.0)
        snap_every = std::max(1L, static_cast<long>(std::llround(config.snapshot_dt / dt)));

    auto stats_of = [&](const ScalarField& f, double t) {
        GammaStepStats s;
        s.t = t;
        s.sup = f.max_value();
        s.inf = f.min_value();
        double acc = 0.0;
        for (int i = 0; i < g.nr; ++i) {
            const double r = g.radius(i);
            for (int j = 0; j < g.nz; ++j) acc += f.at(i, j) * f.at(i, j) * r;
        }
        s.l2 = std::sqrt(acc * kTwoPi * g.dr * g.dz);
        return s;
    };

    GammaRunResult out;
    out.dt = dt;
    ScalarField gamma = initial.gamma;
    double t = initial.time;
    out.trajectory.append(t, gamma);
    out.stats.push_back(stats_of(gamma, t));

    for (long step = 1; step <= nsteps; ++step) {
        if (config.forcing) {
            // forcing sampled at the pre-step time, consistent with the
            // explicit update
            const double t_force = t;
            const ScalarField fsrc = ScalarField::from_function(
                g, Parity::even,
                [&](double r, double z) { return config.forcing(r, z, t_force); });
            gamma = step_core(gamma, t, dt, b, &fsrc, config.outer_bc, config.wall_values);
        } else {
            gamma = step_core(gamma, t, dt, b, nullptr, config.outer_bc, config.wall_values);
        }
        t = initial.time + static_cast<double>(step) * dt;
        const GammaStepStats s = stats_of(gamma, t);
        if (!std::isfinite(s.sup) || !std::isfinite(s.inf)) {
            std::ostringstream msg;
            msg << "run_gamma: non-finite values at step " << step << ", t = " << t;
            throw std::runtime_error(msg.str());
        }
        out.stats.push_back(s);
        if (step % snap_every == 0 || step == nsteps) out.trajectory.append(t, gamma);
    }
    return out;
}

void write_gamma_step_csv(const std::string& path, const std::vector<GammaStepStats>& stats) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.precision(17);
    os << "t,sup_gamma,inf_gamma,l2_gamma\n";
    for (const auto& s : stats) os << s.t << ',' << s.sup << ',' << s.inf << ',' << s.l2 << '\n';
}

} // namespace axilab
