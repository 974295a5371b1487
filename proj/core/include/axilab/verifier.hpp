// Numerical certificate checks for the interior estimates: local maximum
// (mean-value) ratios over parabolic cylinders, the Moser exponent ladder,
// the Nash log-integral inequality, the weighted Poincare quotient, the
// log-transform residual, and the lower-bound / oscillation-decay gates.
//
// Every check reports measured (lhs, rhs, ratio) rather than asserting an
// absolute constant: the analytic constants are existential, so pass
// thresholds are configuration and the reports keep them alongside the data.
#pragma once

#include "axilab/drift.hpp"
#include "axilab/grid.hpp"
#include "axilab/norms.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace axilab {

// Space-time anchor for cylinder-based checks; the spatial center sits on
// the axis.
struct Anchor {
    double z0 = 0.0;
    double t0 = 0.0;
};

// Spatial/temporal cutoff profiles:
//   phi(rho) = smoothstep((sigma1 - rho)/(sigma1 - sigma2))^beta,
//   eta(s) = 1 on (-sigma2^2, 0], smooth down to 0 at -sigma1^2,
// with 1/2 <= sigma2 < sigma1 <= 1. beta = 2 gives the squared standard
// cutoff; unit_normalized() tunes beta so that int zeta^2 dx = 1 over R^3.
class CutoffPair {
public:
    CutoffPair(double sigma1, double sigma2, double beta = 2.0);

    static CutoffPair unit_normalized(); // sigma1 = 1, sigma2 = 1/2, int phi^2 = 1

    double sigma1() const { return sigma1_; }
    double sigma2() const { return sigma2_; }
    double beta() const { return beta_; }

    double phi(double rho) const;
    double eta(double s) const;

    // rescaled profiles: phi(|y|/R), eta(s/R^2), and the normalized
    // zeta_R(x) = R^{-3/2} phi(|x|/R)
    double phi_scaled(double rho, double R) const { return phi(rho / R); }
    double eta_scaled(double s, double R) const { return eta(s / (R * R)); }
    double zeta_scaled(double rho, double R) const { return std::pow(R, -1.5) * phi(rho / R); }

    struct DerivativeBounds {
        double eta_prime = 0.0;         // max |eta'|
        double grad_phi_sqrt = 0.0;     // max |phi'| / sqrt(phi)
        double grad_grad_phi_sqrt = 0.0; // max |(phi'/sqrt(phi))'|
    };
    // sampled on a fine 1D lattice; finite by construction, reported for audits
    DerivativeBounds measure_bounds(int samples = 4096) const;

    double mass() const; // int_{R^3} phi(|x|)^2 dx by 1D quadrature

private:
    double sigma1_ = 1.0;
    double sigma2_ = 0.5;
    double beta_ = 2.0;
};

struct VerifierEntry {
    enum class Verdict { pass, fail, hypothesis_failed, vacuous };

    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double slack = 0.0; // pass means lhs <= rhs * (1 + slack)
    double scale = 0.0;
    Verdict verdict = Verdict::vacuous;
    std::string config;
};

struct VerifierReport {
    std::vector<VerifierEntry> entries;

    void add(VerifierEntry e) { entries.push_back(std::move(e)); }
    // Hypothesis failures and vacuous entries do not fail the report.
    bool all_passed() const;
    int failures() const;
};

VerifierEntry make_bound_entry(std::string name, double lhs, double rhs, double slack,
                               double scale, std::string config = {});

// --- interior estimate checks ----------------------------------------------

// sup_{P(R/2)} |Gamma| / ( R^{-5} iint_{P(R)} |Gamma|^p )^{1/p}; identically
// zero trajectories give 0. Requires >= 8 snapshots inside the finest window.
double mean_value_ratio(const ScalarTrajectory& traj, double R, int p, const Anchor& anchor);

struct MoserRung {
    std::int64_t p_num = 0; // exponent p_j = 3 * 10^j / 9^j, exact
    std::int64_t p_den = 1;
    double exponent = 0.0;
    double radius = 0.0; // R_j = (R/2)(1 + 3^{-j})
    double lp_norm = 0.0;
    double normalized = 0.0; // R_j^{-5/p_j} * lp_norm
};

struct MoserLadder {
    std::vector<MoserRung> rungs;
    // max over consecutive rungs of normalized_{j+1} / normalized_j
    double running_constant = 0.0;
    bool nonincreasing_up_to(double constant) const { return running_constant <= constant; }
};

// Ladder of L^{p_j} norms on shrinking cylinders; J <= 6 keeps the exponents
// inside the range the desk-scale quadrature resolves.
MoserLadder moser_iterate(const ScalarTrajectory& traj, double R, int J, const Anchor& anchor);

struct NashGap {
    double lhs = 0.0; // | ln int f dmu - int ln f dmu |
    double rhs = 0.0; // M ||g||_{L2(dmu)} / int f dmu
};

// Requires weights summing to 1 within 1e-12 and 0 < f_i <= M with M >= 1.
NashGap nash_gap(const std::vector<double>& f, const std::vector<double>& mu, double M);

// int |Psi - mean|^2 zeta_R^2 dx / int |grad Psi|^2 zeta_R^2 dx with the
// discrete zeta^2 weights normalized to unit mass; constant Psi gives 0.
double weighted_poincare_ratio(const ScalarField& psi, const CutoffPair& zeta, double R,
                               double z0);

// Discrete residual of d_t Psi + b.grad Psi + (2/r) d_r Psi - Lap Psi
// + |grad Psi|^2 for Psi = -ln Phi, maximized over snapshot pairs; cells where
// Phi dips below the floor are rejected.
ScalarField log_transform_residual(const ScalarTrajectory& phi_traj, const DriftDecomposition& drift,
                                   double floor = 1e-8);

struct BlowdownConstants {
    double c0 = 0.1;    // mass threshold in |Phi|_{L1(P(R/2))} >= c0 R^5
    double M0 = 10.0;   // log-integral bound level
    double delta = 0.05; // lower-bound level; suite-calibrated default
};

// Gate on the mass hypothesis first; only when it holds is the infimum over
// P(R/8) compared against delta/2 (three-valued reporting).
VerifierEntry lower_bound_check(const ScalarTrajectory& phi_traj, const BlowdownConstants& consts,
                                double R, const Anchor& anchor);

// R^{-5/p} ||Phi||_{L^p(P(R, R/2))} on the hollow cylinder, reported alongside
// the constant axis value a > 1 (positivity is the assertion).
VerifierEntry lp_lower_bound_check(const ScalarTrajectory& phi_traj, double p, double a, double R,
                                   const Anchor& anchor);

// Per adjacent scale pair, J_{R/2} / J_R with pass iff <= 1 - delta/4, plus a
// summary entry carrying the max ratio. The Phi normalization
// (2(M1 - Gamma)/J1 or 2(Gamma - m1)/J1 by the sign of M1 + m1) is applied
// per pair and its axis level is recorded in the entry config.
std::vector<VerifierEntry> oscillation_decay_check(const ScalarTrajectory& traj,
                                                   const DyadicScaleSet& scales, double delta,
                                                   const Anchor& anchor);

// The Phi normalization used by the decay check, exposed for reuse:
// maps Gamma to 2(M1 - Gamma)/J1 when M1 > -m1, else 2(Gamma - m1)/J1,
// with (m1, M1, J1) the extrema over P(R). Returns the axis level a.
ScalarTrajectory normalize_to_phi(const ScalarTrajectory& traj, double R, const Anchor& anchor,
                                  double* a_out = nullptr);

} // namespace axilab
