#include "axilab/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace axilab {
namespace {

struct CylSample {
    double vr, vtheta, vz;
};

// Interpolates cylindrical components at a signed radius: negative radii
// sample the opposite ray, flipping the odd components.
CylSample sample_components(const VectorFieldCyl& v, double r_signed, double z) {
    const double r = std::abs(r_signed);
    const double sign = r_signed < 0.0 ? -1.0 : 1.0;
    CylSample s;
    s.vr = sign * interpolate(v.vr, r, z);
    s.vtheta = sign * interpolate(v.vtheta, r, z);
    s.vz = interpolate(v.vz, r, z);
    return s;
}

} // namespace

std::vector<BlowupCandidate> select_candidates(const VectorTrajectory& traj, double gamma_min) {
    if (!(gamma_min > 0.0 && gamma_min <= 1.0))
        throw std::invalid_argument("select_candidates: gamma_min must lie in (0, 1]");
    std::vector<BlowupCandidate> out;
    const Grid* g = traj.empty() ? nullptr : &traj.snapshot(0).grid();
    double running_max = 0.0;
    double last_emitted = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const VectorFieldCyl& v = traj.snapshot(k);
        double best = 0.0;
        int bi = 0, bj = 0;
        for (int i = 0; i < g->nr; ++i)
            for (int j = 0; j < g->nz; ++j) {
                const double a = v.vr.at(i, j), b = v.vtheta.at(i, j), c = v.vz.at(i, j);
                const double speed = std::sqrt(a * a + b * b + c * c);
                if (speed > best) {
                    best = speed;
                    bi = i;
                    bj = j;
                }
            }
        if (best <= 0.0) continue;
        running_max = std::max(running_max, best);
        const bool new_peak = out.empty() ? true : best > last_emitted;
        if (new_peak && best >= gamma_min * running_max) {
            BlowupCandidate c;
            c.r_k = g->radius(bi);
            c.z_k = g->axial(bj);
            c.t_k = traj.time(k);
            c.Q_k = best;
            c.gamma_k = best / running_max;
            c.snapshot_index = k;
            out.push_back(c);
            last_emitted = best;
        }
    }
    return out;
}

RescaledTrajectory::RescaledTrajectory(std::shared_ptr<const VectorTrajectory> source,
                                       BlowupCandidate candidate, const Grid& target,
                                       double window)
    : source_(std::move(source)), candidate_(candidate) {
    if (!source_ || source_->empty())
        throw std::invalid_argument("rescale: empty source trajectory");
    if (!(candidate_.Q_k > 0.0)) throw std::invalid_argument("rescale: candidate speed must be positive");
    if (!(window > 0.0)) throw std::invalid_argument("rescale: window must be positive");

    const Grid& src = source_->snapshot(0).grid();
    const double Q = candidate_.Q_k;

    n_xi_ = 2 * target.nr;
    n_zeta_ = target.nz;
    xi_half_ = target.r_max;
    zeta_half_ = 0.5 * target.z_len;
    dxi_ = target.r_max / target.nr;   // = 2 xi_half / n_xi
    dzeta_ = target.z_len / target.nz; // = 2 zeta_half / n_zeta

    // spatial coverage: the mapped box must stay inside the source domain
    const double reach = std::abs(candidate_.r_k) + xi_half_ / Q;
    if (reach >= src.r_max)
        throw std::invalid_argument("rescale: offset box leaves the source domain radially");

    const double t_begin = candidate_.t_k - window / (Q * Q);
    const double t_tol = 1e-9 * (1.0 + std::abs(source_->t_front()));
    if (t_begin < source_->t_front() - t_tol)
        throw std::invalid_argument("rescale: window exceeds source time coverage");

    // resample at the source snapshot instants mapped into rescaled time
    std::vector<std::size_t> src_idx;
    for (std::size_t k = 0; k < source_->size(); ++k) {
        const double t = source_->time(k);
        if (t >= t_begin - 1e-12 && t <= candidate_.t_k + 1e-12) src_idx.push_back(k);
    }
    if (src_idx.empty()) throw std::invalid_argument("rescale: no source snapshots in window");

    times_.reserve(src_idx.size());
    samples_.resize(src_idx.size() * static_cast<std::size_t>(n_xi_) * n_zeta_ * 3);
    sup_speed_ = 0.0;
    std::size_t m = 0;
    for (std::size_t k : src_idx) {
        times_.push_back((source_->time(k) - candidate_.t_k) * Q * Q);
        const VectorFieldCyl& v = source_->snapshot(k);
        for (int i = 0; i < n_xi_; ++i) {
            const double r_src = candidate_.r_k + xi(i) / Q;
            for (int j = 0; j < n_zeta_; ++j) {
                double z_src = candidate_.z_k + zeta(j) / Q;
                z_src -= src.z_len * std::floor(z_src / src.z_len);
                const CylSample s = sample_components(v, r_src, z_src);
                const std::size_t base = offset(m, i, j) * 3;
                samples_[base + 0] = s.vr / Q;
                samples_[base + 1] = s.vtheta / Q;
                samples_[base + 2] = s.vz / Q;
                const double speed = std::sqrt(s.vr * s.vr + s.vtheta * s.vtheta + s.vz * s.vz) / Q;
                sup_speed_ = std::max(sup_speed_, speed);
            }
        }
        ++m;
    }

    {
        const VectorFieldCyl& v = source_->snapshot(src_idx.back());
        const CylSample s = sample_components(v, candidate_.r_k, candidate_.z_k);
        center_speed_ = std::sqrt(s.vr * s.vr + s.vtheta * s.vtheta + s.vz * s.vz) / Q;
    }
}

RescaledTrajectory rescale(std::shared_ptr<const VectorTrajectory> traj, const BlowupCandidate& c,
                           const Grid& target, double window) {
    return RescaledTrajectory(std::move(traj), c, target, window);
}

VerifierEntry swirl_residual(const RescaledTrajectory& traj, double gamma_bound) {
    double sup = 0.0;
    for (std::size_t m = 0; m < traj.snapshots(); ++m)
        for (int i = 0; i < traj.n_xi(); ++i)
            for (int j = 0; j < traj.n_zeta(); ++j)
                sup = std::max(sup, std::abs(traj.vtheta(m, i, j)));

    const BlowupCandidate& c = traj.candidate();
    VerifierEntry e;
    e.name = "swirl_residual";
    e.lhs = sup;
    e.scale = c.Q_k * c.r_k;
    std::ostringstream cfg;
    cfg << "gamma_bound=" << gamma_bound << ", Qk*rk=" << c.Q_k * c.r_k;
    e.config = cfg.str();
    if (c.r_k <= 0.0) {
        e.rhs = std::numeric_limits<double>::infinity();
        e.verdict = sup == 0.0 ? VerifierEntry::Verdict::pass : VerifierEntry::Verdict::vacuous;
        return e;
    }
    e.rhs = gamma_bound / (c.Q_k * c.r_k);
    e.ratio = e.rhs > 0.0 ? e.lhs / e.rhs : 0.0;
    // interpolation slack: the mapped window sees radii slightly below r_k
    e.slack = 0.05;
    e.verdict = e.lhs <= e.rhs * (1.0 + e.slack) ? VerifierEntry::Verdict::pass
                                                 : VerifierEntry::Verdict::fail;
    return e;
}

double planar_residual(const RescaledTrajectory& traj) {
    const BlowupCandidate& c = traj.candidate();
    const VectorTrajectory& source = traj.source();
    const Grid& src = source.snapshot(0).grid();
    const double Q = c.Q_k;
    const double h = std::max(src.dr, src.dz); // theta-displacement step

    // locate the source snapshots the rescaled times came from
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t m = 0; m < traj.snapshots(); ++m) {
        const double t_src = c.t_k + traj.time(m) / (Q * Q);
        // nearest source snapshot (the construction used exact instants)
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < source.size(); ++k) {
            const double d = std::abs(source.time(k) - t_src);
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        const VectorFieldCyl& v = source.snapshot(best);
        for (int i = 0; i < traj.n_xi(); ++i) {
            const double r0 = traj.source_radius(i);
            for (int j = 0; j < traj.n_zeta(); ++j) {
                double z_src = c.z_k + traj.zeta(j) / Q;
                z_src -= src.z_len * std::floor(z_src / src.z_len);
                // displace along e_theta of the anchor ray (Cartesian e_2)
                auto cart = [&](double sgn) {
                    const double x1 = r0;
                    const double x2 = sgn * h;
                    const double rho = std::sqrt(x1 * x1 + x2 * x2);
                    const double cphi = rho > 0.0 ? x1 / rho : 1.0;
                    const double sphi = rho > 0.0 ? x2 / rho : 0.0;
                    const CylSample s = sample_components(v, rho, z_src);
                    // e_r = (c, s), e_theta = (-s, c)
                    return std::array<double, 3>{s.vr * cphi - s.vtheta * sphi,
                                                 s.vr * sphi + s.vtheta * cphi, s.vz};
                };
                const auto plus = cart(1.0);
                const auto minus = cart(-1.0);
                double mag2 = 0.0;
                for (int comp = 0; comp < 3; ++comp) {
                    const double d = (plus[comp] - minus[comp]) / (2.0 * h) / (Q * Q);
                    mag2 += d * d;
                }
                acc += mag2;
                ++count;
            }
        }
    }
    return count ? std::sqrt(acc / static_cast<double>(count)) : 0.0;
}

double constancy_residual(const RescaledTrajectory& traj) {
    double worst = 0.0;
    const long n = static_cast<long>(traj.n_xi()) * traj.n_zeta();
    for (std::size_t m = 0; m < traj.snapshots(); ++m) {
        double total = 0.0;
        for (int comp = 0; comp < 3; ++comp) {
            double mean = 0.0;
            for (int i = 0; i < traj.n_xi(); ++i)
                for (int j = 0; j < traj.n_zeta(); ++j)
                    mean += comp == 0 ? traj.vr(m, i, j)
                                      : (comp == 1 ? traj.vtheta(m, i, j) : traj.vz(m, i, j));
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (int i = 0; i < traj.n_xi(); ++i)
                for (int j = 0; j < traj.n_zeta(); ++j) {
                    const double val = comp == 0 ? traj.vr(m, i, j)
                                                 : (comp == 1 ? traj.vtheta(m, i, j)
                                                              : traj.vz(m, i, j));
                    const double d = val - mean;
                    var += d * d;
                }
            total += std::sqrt(var / static_cast<double>(n));
        }
        worst = std::max(worst, total);
    }
    return worst;
}

MeanValueReport harmonic_mean_value_check(const ScalarField& B, double z0, double harmonic_tol) {
    const Grid& g = B.grid();
    MeanValueReport rep;

    // residual scanned over the neighborhood the ball comparisons live in
    const double r_big = 0.5 * std::min(g.r_max, 0.5 * g.z_len);
    const double reach = r_big + 2.0 * std::max(g.dr, g.dz);
    const double idr2 = 1.0 / (g.dr * g.dr);
    const double idz2 = 1.0 / (g.dz * g.dz);
    for (int i = 0; i < g.nr - 1; ++i) {
        const double r = g.radius(i);
        if (r > reach) break;
        for (int j = 0; j < g.nz; ++j) {
            const double dzp = g.z_distance(g.axial(j), z0);
            if (r * r + dzp * dzp > reach * reach) continue;
            const double lap = (B.at(i + 1, j) - 2.0 * B.at(i, j) + B.at(i - 1, j)) * idr2 +
                               (B.at(i + 1, j) - B.at(i - 1, j)) / (2.0 * g.dr * r) +
                               (B.at(i, j + 1) - 2.0 * B.at(i, j) + B.at(i, j - 1)) * idz2;
            rep.laplacian_max = std::max(rep.laplacian_max, std::abs(lap));
        }
    }
    rep.harmonic = rep.laplacian_max <= harmonic_tol;

    // center value: z-interpolated rows, then even-parity radial extrapolation
    const double b0 = interpolate(B, g.radius(0), z0);
    const double b1 = interpolate(B, g.radius(1), z0);
    rep.center = (9.0 * b0 - b1) / 8.0;

    for (int l = 0; l < 4; ++l) {
        const double R = r_big * std::pow(0.5, l);
        if (R < 4.0 * std::max(g.dr, g.dz)) break;
        const double avg = ball_mean(B, R, z0);
        const double defect = std::abs(avg - rep.center);
        rep.defects.emplace_back(R, defect);
        rep.max_defect = std::max(rep.max_defect, defect);
    }
    return rep;
}

} // namespace axilab
