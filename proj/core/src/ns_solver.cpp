#include "axilab/ns_solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <sstream>

namespace axilab {
namespace {

const double kTwoPi = 2.0 * std::acos(-1.0);

double weighted_mean(const ScalarField& p) {
    const Grid& g = p.grid();
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            num += p.at(i, j) * r;
            den += r;
        }
    }
    return num / den;
}

void subtract_weighted_mean(ScalarField& p) {
    const double m = weighted_mean(p);
    const Grid& g = p.grid();
    for (int i = -g.ghost_layers; i < g.nr + g.ghost_layers; ++i)
        for (int j = 0; j < g.nz; ++j) p.at(i, j) -= m;
}

} // namespace

// ---------------------------------------------------------------------------
// Projection solver internals
// ---------------------------------------------------------------------------

struct NSSolver::Impl {
    Grid grid;
    Options options;

    // DFT tables: cs[m][j], sn[m][j] for modes m = 0..m_hi
    std::vector<std::vector<double>> cs, sn;
    int m_hi = 0; // nz/2 for even nz, (nz-1)/2 for odd

    Eigen::MatrixXd m_dg;                       // composed div(grad .) radial operator
    Eigen::VectorXd q_eta;                      // divergence response of the radial flux corrector
    std::vector<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>> mode_qr; // per mode, sigma^2 > 0
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> aug_qr;               // sigma^2 == 0, augmented
    std::vector<double> sigma2;

    // OuterBc::fixed boundary data
    bool have_fixed = false;
    std::vector<double> ghost_u, ghost_v, ghost_w; // [layer][j] flattened
    std::vector<double> wall_slope;                // pressure d_r at the wall, per j

    explicit Impl(const Grid& g, Options opt) : grid(g), options(opt) { build(); }

    // --- wide centered gradient of an interior pressure vector, with the
    //     even axis closure and homogeneous Neumann wall closure
    Eigen::VectorXd grad_r(const Eigen::VectorXd& p) const {
        const int n = grid.nr;
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) {
            const double pm = (i == 0) ? p[0] : p[i - 1];
            const double pp = (i == n - 1) ? p[n - 1] : p[i + 1];
            g[i] = (pp - pm) / (2.0 * grid.dr);
        }
        return g;
    }

    // --- radial part of the measured divergence applied to an interior
    //     radial-velocity vector, encoding how ghosts respond to interior
    //     values: parity at the axis, the wall per the outer policy
    Eigen::VectorXd div_r(const Eigen::VectorXd& u) const {
        const int n = grid.nr;
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) {
            double flux_m, flux_p;
            if (i == 0)
                flux_m = grid.radius(0) * u[0]; // odd ghost: r_{-1} u_{-1} = r_0 u_0
            else
                flux_m = grid.radius(i - 1) * u[i - 1];
            if (i == n - 1) {
                if (options.outer_bc == OuterBc::dirichlet_zero)
                    flux_p = -grid.radius(n) * u[n - 1];
                else
                    flux_p = 0.0; // fixed ghosts do not respond to the correction
            } else {
                flux_p = grid.radius(i + 1) * u[i + 1];
            }
            d[i] = (flux_p - flux_m) / (2.0 * grid.dr * grid.radius(i));
        }
        return d;
    }

    void build() {
        const int n = grid.nr;
        const int nz = grid.nz;
        m_hi = nz / 2;

        cs.assign(m_hi + 1, std::vector<double>(nz));
        sn.assign(m_hi + 1, std::vector<double>(nz));
        for (int m = 0; m <= m_hi; ++m)
            for (int j = 0; j < nz; ++j) {
                const double th = kTwoPi * m * j / nz;
                cs[m][j] = std::cos(th);
                sn[m][j] = std::sin(th);
            }

        m_dg.resize(n, n);
        for (int k = 0; k < n; ++k) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e[k] = 1.0;
            m_dg.col(k) = div_r(grad_r(e));
        }
        Eigen::VectorXd eta(n);
        for (int i = 0; i < n; ++i) eta[i] = grid.radius(i);
        q_eta = div_r(eta);

        sigma2.assign(m_hi + 1, 0.0);
        mode_qr.resize(m_hi + 1);
        bool have_aug = false;
        for (int m = 0; m <= m_hi; ++m) {
            const double s = std::sin(kTwoPi * m / nz) / grid.dz;
            sigma2[m] = s * s;
            if (sigma2[m] < 1e-24) {
                if (!have_aug) {
                    Eigen::MatrixXd aug(n, n + 1);
                    aug.leftCols(n) = m_dg;
                    aug.col(n) = q_eta;
                    aug_qr.compute(aug);
                    have_aug = true;
                }
            } else {
                Eigen::MatrixXd a = m_dg;
                a.diagonal().array() -= sigma2[m];
                mode_qr[m].compute(a);
            }
        }
    }

    void refresh_ghosts(VectorFieldCyl& v) const {
        v.fill_axis_ghosts();
        const int gl = grid.ghost_layers;
        switch (options.outer_bc) {
            case OuterBc::dirichlet_zero:
                v.vr.fill_outer_ghosts_dirichlet_zero();
                v.vtheta.fill_outer_ghosts_dirichlet_zero();
                v.vz.fill_outer_ghosts_dirichlet_zero();
                break;
            case OuterBc::fixed: {
                if (!have_fixed)
                    throw std::logic_error("NSSolver: OuterBc::fixed requires set_fixed_boundary()");
                for (int k = 0; k < gl; ++k)
                    for (int j = 0; j < grid.nz; ++j) {
                        const std::size_t idx = static_cast<std::size_t>(k) * grid.nz + j;
                        v.vr.at(grid.nr + k, j) = ghost_u[idx];
                        v.vtheta.at(grid.nr + k, j) = ghost_v[idx];
                        v.vz.at(grid.nr + k, j) = ghost_w[idx];
                    }
                break;
            }
            case OuterBc::analytic:
                throw std::logic_error("NSSolver: analytic outer ghosts are not supported");
        }
    }

    // Pressure solve for the composed operator; returns the gradient
    // correction already evaluated on cells, plus gamma-corrector weights.
    void project(const ScalarField& div_over_dt, ScalarField& p_out,
                 std::vector<double>& gamma_by_j) const {
        const int n = grid.nr;
        const int nz = grid.nz;

        // forward transform per radius
        Eigen::MatrixXd re(n, m_hi + 1), im(n, m_hi + 1);
        for (int i = 0; i < n; ++i)
            for (int m = 0; m <= m_hi; ++m) {
                double a = 0.0, b = 0.0;
                for (int j = 0; j < nz; ++j) {
                    const double v = div_over_dt.at(i, j);
                    a += v * cs[m][j];
                    b -= v * sn[m][j];
                }
                re(i, m) = a;
                im(i, m) = b;
            }

        Eigen::MatrixXd pre = Eigen::MatrixXd::Zero(n, m_hi + 1);
        Eigen::MatrixXd pim = Eigen::MatrixXd::Zero(n, m_hi + 1);
        double gamma0 = 0.0, gamma_nyq = 0.0;
        for (int m = 0; m <= m_hi; ++m) {
            if (sigma2[m] < 1e-24) {
                const Eigen::VectorXd sol_re = aug_qr.solve(re.col(m));
                const Eigen::VectorXd sol_im = aug_qr.solve(im.col(m));
                pre.col(m) = sol_re.head(n);
                pim.col(m) = sol_im.head(n);
                if (m == 0)
                    gamma0 = sol_re[n];
                else
                    gamma_nyq = sol_re[n];
            } else {
                pre.col(m) = mode_qr[m].solve(re.col(m));
                pim.col(m) = mode_qr[m].solve(im.col(m));
            }
        }

        // inverse transform with conjugate symmetry of the real spectrum
        const bool even_nz = (nz % 2 == 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < nz; ++j) {
                double acc = pre(i, 0);
                const int m_half = even_nz ? m_hi - 1 : m_hi;
                for (int m = 1; m <= m_half; ++m)
                    acc += 2.0 * (pre(i, m) * cs[m][j] - pim(i, m) * sn[m][j]);
                if (even_nz) acc += pre(i, m_hi) * cs[m_hi][j];
                p_out.at(i, j) = acc / nz;
            }

        gamma_by_j.assign(nz, 0.0);
        for (int j = 0; j < nz; ++j) {
            double gval = gamma0;
            if (even_nz) gval += gamma_nyq * cs[m_hi][j];
            gamma_by_j[j] = gval / nz;
        }
    }
};

NSSolver::NSSolver(const Grid& grid) : NSSolver(grid, Options()) {}
NSSolver::NSSolver(const Grid& grid, Options options)
    : impl_(std::make_unique<Impl>(grid, options)) {}
NSSolver::~NSSolver() = default;
NSSolver::NSSolver(NSSolver&&) noexcept = default;
NSSolver& NSSolver::operator=(NSSolver&&) noexcept = default;

const Grid& NSSolver::grid() const { return impl_->grid; }

void NSSolver::set_fixed_boundary(const NSState& initial) {
    Impl& im = *impl_;
    const Grid& g = im.grid;
    const int gl = g.ghost_layers;
    im.ghost_u.assign(static_cast<std::size_t>(gl) * g.nz, 0.0);
    im.ghost_v = im.ghost_u;
    im.ghost_w = im.ghost_u;
    im.wall_slope.assign(g.nz, 0.0);
    for (int k = 0; k < gl; ++k)
        for (int j = 0; j < g.nz; ++j) {
            const std::size_t idx = static_cast<std::size_t>(k) * g.nz + j;
            im.ghost_u[idx] = initial.velocity.vr.at(g.nr + k, j);
            im.ghost_v[idx] = initial.velocity.vtheta.at(g.nr + k, j);
            im.ghost_w[idx] = initial.velocity.vz.at(g.nr + k, j);
        }
    for (int j = 0; j < g.nz; ++j)
        im.wall_slope[j] =
            (initial.pressure.at(g.nr, j) - initial.pressure.at(g.nr - 1, j)) / g.dr;
    im.have_fixed = true;
}

double NSSolver::stability_limit(const NSState& state) const {
    const Grid& g = impl_->grid;
    const double r0 = g.radius(0);
    double adv = 0.0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            adv = std::max(adv, std::abs(state.velocity.vr.at(i, j)) / g.dr +
                                    std::abs(state.velocity.vz.at(i, j)) / g.dz);
    const double denom =
        3.0 / (g.dr * g.dr) + 2.0 / (g.dz * g.dz) + 1.0 / (r0 * r0) + adv;
    return 1.0 / denom;
}

NSState NSSolver::step(const NSState& state, double dt, NSStepInfo* info) const {
    const Impl& im = *impl_;
    const Grid& g = im.grid;
    if (!g.same_layout(state.velocity.grid()))
        throw std::invalid_argument("NSSolver::step: state grid mismatch");
    if (dt > stability_limit(state) * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "NSSolver::step: dt = " << dt << " exceeds stability limit "
            << stability_limit(state);
        throw CflViolation(msg.str());
    }

    VectorFieldCyl cur = state.velocity;
    im.refresh_ghosts(cur);

    VectorFieldCyl star(g);
    const double idr2 = 1.0 / (g.dr * g.dr);
    const double idz2 = 1.0 / (g.dz * g.dz);

    auto upwind = [&](const ScalarField& f, int i, int j, double u, double w) {
        double adv = 0.0;
        adv += u > 0.0 ? u * (f.at(i, j) - f.at(i - 1, j)) / g.dr
                       : u * (f.at(i + 1, j) - f.at(i, j)) / g.dr;
        adv += w > 0.0 ? w * (f.at(i, j) - f.at(i, j - 1)) / g.dz
                       : w * (f.at(i, j + 1) - f.at(i, j)) / g.dz;
        return adv;
    };

    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        const double cp = idr2 + 1.0 / (2.0 * r * g.dr);
        const double cm = idr2 - 1.0 / (2.0 * r * g.dr);
        const double ir2 = 1.0 / (r * r);
        for (int j = 0; j < g.nz; ++j) {
            const double u = cur.vr.at(i, j);
            const double v = cur.vtheta.at(i, j);
            const double w = cur.vz.at(i, j);

            auto lap = [&](const ScalarField& f) {
                return cp * f.at(i + 1, j) + cm * f.at(i - 1, j) - 2.0 * idr2 * f.at(i, j) +
                       (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) * idz2;
            };

            const double du = -upwind(cur.vr, i, j, u, w) + v * v / r + lap(cur.vr) - ir2 * u;
            const double dv = -upwind(cur.vtheta, i, j, u, w) - u * v / r + lap(cur.vtheta) - ir2 * v;
            const double dw = -upwind(cur.vz, i, j, u, w) + lap(cur.vz);

            star.vr.at(i, j) = u + dt * du;
            star.vtheta.at(i, j) = v + dt * dv;
            star.vz.at(i, j) = w + dt * dw;
        }
    }

    // driven wall carries a prescribed pressure slope; fold it in before the
    // homogeneous-closure solve
    if (im.options.outer_bc == OuterBc::fixed) {
        for (int j = 0; j < g.nz; ++j)
            star.vr.at(g.nr - 1, j) -= dt * 0.5 * im.wall_slope[j];
    }

    im.refresh_ghosts(star);
    ScalarField d = divergence(star);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) d.at(i, j) /= dt;

    ScalarField p(g, Parity::even);
    std::vector<double> gamma_by_j;
    im.project(d, p, gamma_by_j);
    p.fill_axis_ghosts();
    for (int k = 0; k < g.ghost_layers; ++k)
        for (int j = 0; j < g.nz; ++j) p.at(g.nr + k, j) = p.at(g.nr - 1, j);

    NSState out;
    out.time = state.time + dt;
    out.velocity = star;
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            out.velocity.vr.at(i, j) -=
                dt * ((p.at(i + 1, j) - p.at(i - 1, j)) / (2.0 * g.dr) + gamma_by_j[j] * r);
            out.velocity.vz.at(i, j) -= dt * (p.at(i, j + 1) - p.at(i, j - 1)) / (2.0 * g.dz);
        }
    }
    im.refresh_ghosts(out.velocity);

    subtract_weighted_mean(p);
    out.pressure = p;

    if (info) {
        info->poisson_iterations = 1; // direct per-mode factorization
        info->divergence_residual = max_abs_divergence(compute_b(out));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Compact Poisson solve (conjugate gradients, r-weighted inner product)
// ---------------------------------------------------------------------------

namespace {

ScalarField apply_compact_laplacian(const ScalarField& p) {
    const Grid& g = p.grid();
    ScalarField out(g, Parity::even);
    const double idr2 = 1.0 / (g.dr * g.dr);
    const double idz2 = 1.0 / (g.dz * g.dz);
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        const double face_m = i * g.dr;       // inner face radius, 0 at the axis
        const double face_p = (i + 1) * g.dr; // outer face radius
        for (int j = 0; j < g.nz; ++j) {
            double acc = 0.0;
            if (i > 0) acc += face_m * (p.at(i - 1, j) - p.at(i, j)) * idr2;
            if (i < g.nr - 1) acc += face_p * (p.at(i + 1, j) - p.at(i, j)) * idr2;
            acc /= r;
            acc += (p.at(i, j + 1) - 2.0 * p.at(i, j) + p.at(i, j - 1)) * idz2;
            out.at(i, j) = acc;
        }
    }
    return out;
}

double weighted_dot(const ScalarField& a, const ScalarField& b) {
    const Grid& g = a.grid();
    double acc = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) acc += a.at(i, j) * b.at(i, j) * r;
    }
    return acc;
}

} // namespace

ScalarField pressure_poisson(const ScalarField& rhs, const PoissonSolveConfig& cfg,
                             int* iterations) {
    if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0))
        throw std::invalid_argument("pressure_poisson: rel_tol must lie in (0, 1)");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("pressure_poisson: max_iterations must be >= 1");

    const Grid& g = rhs.grid();
    ScalarField b = rhs;
    // compatibility residual of the Neumann problem
    {
        double num = 0.0, den = 0.0;
        for (int i = 0; i < g.nr; ++i) {
            const double r = g.radius(i);
            for (int j = 0; j < g.nz; ++j) {
                num += b.at(i, j) * r;
                den += r;
            }
        }
        const double mean = num / den;
        for (int i = 0; i < g.nr; ++i)
            for (int j = 0; j < g.nz; ++j) b.at(i, j) -= mean;
    }

    ScalarField x(g, Parity::even);
    ScalarField res = b;
    ScalarField dir = res;
    double rho = weighted_dot(res, res);
    const double rhs_norm = std::sqrt(std::max(rho, 1e-300));
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        if (std::sqrt(rho) <= cfg.rel_tol * rhs_norm) break;
        const ScalarField q = apply_compact_laplacian(dir);
        const double dq = weighted_dot(dir, q);
        if (dq == 0.0) break;
        const double alpha = rho / dq;
        for (int i = 0; i < g.nr; ++i)
            for (int j = 0; j < g.nz; ++j) {
                x.at(i, j) += alpha * dir.at(i, j);
                res.at(i, j) -= alpha * q.at(i, j);
            }
        const double rho_new = weighted_dot(res, res);
        const double beta = rho_new / rho;
        rho = rho_new;
        for (int i = 0; i < g.nr; ++i)
            for (int j = 0; j < g.nz; ++j) dir.at(i, j) = res.at(i, j) + beta * dir.at(i, j);
    }
    if (std::sqrt(rho) > cfg.rel_tol * rhs_norm) {
        std::ostringstream msg;
        msg << "pressure_poisson: no convergence in " << cfg.max_iterations
            << " iterations, residual " << std::sqrt(rho) / rhs_norm;
        throw std::runtime_error(msg.str());
    }
    if (iterations) *iterations = it;
    subtract_weighted_mean(x);
    x.fill_axis_ghosts();
    return x;
}

// ---------------------------------------------------------------------------
// Derived quantities
// ---------------------------------------------------------------------------

ScalarField compute_gamma(const NSState& state) {
    const Grid& g = state.velocity.grid();
    ScalarField gamma(g, Parity::even);
    for (int i = -g.ghost_layers; i < g.nr + g.ghost_layers; ++i)
        for (int j = 0; j < g.nz; ++j)
            gamma.at(i, j) = g.radius(i) * state.velocity.vtheta.at(i, j);
    return gamma;
}

VectorFieldCyl compute_b(const NSState& state) {
    VectorFieldCyl b = state.velocity;
    const Grid& g = b.grid();
    for (int i = -g.ghost_layers; i < g.nr + g.ghost_layers; ++i)
        for (int j = 0; j < g.nz; ++j) b.vtheta.at(i, j) = 0.0;
    return b;
}

namespace {

// Stream curl and its weighted adjoint, with the odd axis closure and zero
// closure past the wall.
void stream_curl(const Grid& g, const ScalarField& B, ScalarField& out_u, ScalarField& out_w) {
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            out_u.at(i, j) = -(B.at(i, j + 1) - B.at(i, j - 1)) / (2.0 * g.dz);
            const double bm = (i == 0) ? g.radius(0) * B.at(0, j) // r_{-1} B_{-1} = r_0 B_0
                                       : g.radius(i - 1) * B.at(i - 1, j);
            const double bp = (i == g.nr - 1) ? 0.0 : g.radius(i + 1) * B.at(i + 1, j);
            out_w.at(i, j) = (bp - bm) / (2.0 * g.dr * r);
        }
    }
}

void stream_curl_adjoint(const Grid& g, const ScalarField& u, const ScalarField& w,
                         ScalarField& out) {
    for (int i = -g.ghost_layers; i < g.nr + g.ghost_layers; ++i)
        for (int j = 0; j < g.nz; ++j) out.at(i, j) = 0.0;
    auto scatter = [&](int a, int j, double contrib) {
        // resolve the closure reads: odd mirror at the axis, zero past the wall
        if (a == -1) {
            out.at(0, j) -= contrib;
            return;
        }
        if (a >= g.nr) return;
        out.at(a, j) += contrib;
    };
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            const double cu = r * u.at(i, j);
            scatter(i, j + 1, -cu / (2.0 * g.dz));
            scatter(i, j - 1, cu / (2.0 * g.dz));
            const double cw = w.at(i, j); // r_i cancels against the 1/r_i in the curl
            if (i == 0) {
                scatter(0, j, -g.radius(0) * cw / (2.0 * g.dr));
            } else {
                scatter(i - 1, j, -g.radius(i - 1) * cw / (2.0 * g.dr));
            }
            if (i < g.nr - 1) scatter(i + 1, j, g.radius(i + 1) * cw / (2.0 * g.dr));
        }
    }
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) out.at(i, j) /= r;
    }
}

double stream_dot(const Grid& g, const ScalarField& a, const ScalarField& b) {
    double acc = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) acc += a.at(i, j) * b.at(i, j) * r;
    }
    return acc;
}

} // namespace

ScalarField compute_stream(const NSState& state, const PoissonSolveConfig& cfg, int* iterations) {
    const Grid& g = state.velocity.grid();
    const ScalarField& bu = state.velocity.vr;
    const ScalarField& bw = state.velocity.vz;

    // CGLS on min || curl(B) - b ||, weighted by the cylindrical measure
    ScalarField x(g, Parity::odd);
    ScalarField res_u = bu, res_w = bw; // residual b - curl(x), x = 0
    ScalarField s(g, Parity::odd);
    stream_curl_adjoint(g, res_u, res_w, s);
    ScalarField dir = s;
    double snorm = stream_dot(g, s, s);
    const double s0 = std::sqrt(std::max(snorm, 1e-300));
    ScalarField qu(g, Parity::odd), qw(g, Parity::even);
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        if (std::sqrt(snorm) <= cfg.rel_tol * s0) break;
        stream_curl(g, dir, qu, qw);
        const double qq = stream_dot(g, qu, qu) + stream_dot(g, qw, qw);
        if (qq == 0.0) break;
        const double alpha = snorm / qq;
        for (int i = 0; i < g.nr; ++i)
            for (int j = 0; j < g.nz; ++j) {
                x.at(i, j) += alpha * dir.at(i, j);
                res_u.at(i, j) -= alpha * qu.at(i, j);
                res_w.at(i, j) -= alpha * qw.at(i, j);
            }
        stream_curl_adjoint(g, res_u, res_w, s);
        const double snorm_new = stream_dot(g, s, s);
        const double beta = snorm_new / snorm;
        snorm = snorm_new;
        for (int i = 0; i < g.nr; ++i)
            for (int j = 0; j < g.nz; ++j) dir.at(i, j) = s.at(i, j) + beta * dir.at(i, j);
    }
    if (std::sqrt(snorm) > cfg.rel_tol * s0) {
        std::ostringstream msg;
        msg << "compute_stream: no convergence in " << cfg.max_iterations
            << " iterations, normal residual " << std::sqrt(snorm) / s0;
        throw std::runtime_error(msg.str());
    }
    if (iterations) *iterations = it;
    x.fill_axis_ghosts();
    return x;
}

// ---------------------------------------------------------------------------
// Run driver
// ---------------------------------------------------------------------------

double kinetic_energy(const VectorFieldCyl& v) {
    const Grid& g = v.grid();
    double acc = 0.0;
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        for (int j = 0; j < g.nz; ++j) {
            const double a = v.vr.at(i, j), b = v.vtheta.at(i, j), c = v.vz.at(i, j);
            acc += 0.5 * (a * a + b * b + c * c) * r;
        }
    }
    return acc * kTwoPi * g.dr * g.dz;
}

NSRunResult run_ns(const NSState& initial, const NSRunConfig& config) {
    if (!(config.end_time > 0.0)) throw std::invalid_argument("run_ns: end_time must be positive");
    const Grid& g = initial.velocity.grid();
    NSSolver solver(g, config.options);
    if (config.options.outer_bc == OuterBc::fixed) solver.set_fixed_boundary(initial);

    double dt = config.dt;
    if (dt <= 0.0) dt = config.cfl * solver.stability_limit(initial);
    const long nsteps = std::max(1L, static_cast<long>(std::ceil(config.end_time / dt - 1e-9)));
    dt = config.end_time / static_cast<double>(nsteps);

    long snap_every = 1;
    if (config.snapshot_dt > 0.0)
        snap_every = std::max(1L, static_cast<long>(std::llround(config.snapshot_dt / dt)));

    auto stats_of = [&](const NSState& s, const NSStepInfo* info) {
        NSStepStats st;
        st.t = s.time;
        st.kinetic_energy = kinetic_energy(s.velocity);
        st.max_speed = s.velocity.max_speed();
        st.max_gamma = compute_gamma(s).max_abs();
        st.divergence_residual = info ? info->divergence_residual : max_abs_divergence(compute_b(s));
        st.poisson_iterations = info ? info->poisson_iterations : 0;
        return st;
    };

    NSRunResult out;
    out.dt = dt;
    NSState s = initial;
    out.trajectory.append(s.time, s.velocity);
    out.stats.push_back(stats_of(s, nullptr));

    for (long step = 1; step <= nsteps; ++step) {
        NSStepInfo info;
        s = solver.step(s, dt, &info);
        s.time = initial.time + static_cast<double>(step) * dt;
        if (!s.velocity.all_finite()) {
            std::ostringstream msg;
            msg << "run_ns: non-finite velocity at step " << step << ", t = " << s.time;
            throw std::runtime_error(msg.str());
        }
        out.stats.push_back(stats_of(s, &info));
        if (step % snap_every == 0 || step == nsteps) out.trajectory.append(s.time, s.velocity);
    }
    return out;
}

void write_ns_step_csv(const std::string& path, const std::vector<NSStepStats>& stats) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.precision(17);
    os << "t,kinetic_energy,max_speed,max_gamma,divergence_residual,poisson_iterations\n";
    for (const auto& s : stats)
        os << s.t << ',' << s.kinetic_energy << ',' << s.max_speed << ',' << s.max_gamma << ','
           << s.divergence_residual << ',' << s.poisson_iterations << '\n';
}

} // namespace axilab
