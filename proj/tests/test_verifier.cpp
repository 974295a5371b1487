#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "axilab/gamma_solver.hpp"
#include "axilab/verifier.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace axilab;

namespace {

ScalarTrajectory steady_trajectory(const ScalarField& f, double t0, double t1, int n) {
    ScalarTrajectory traj;
    auto ptr = std::make_shared<const ScalarField>(f);
    for (int k = 0; k <= n; ++k) traj.append(t0 + (t1 - t0) * k / n, ptr);
    return traj;
}

} // namespace

TEST_CASE("cutoff pair profiles") {
    const CutoffPair psi(1.0, 0.5);
    CHECK(psi.phi(0.25) == doctest::Approx(1.0));
    CHECK(psi.phi(0.5) == doctest::Approx(1.0));
    CHECK(psi.phi(1.0) == 0.0);
    CHECK(psi.phi(1.2) == 0.0);
    for (double rho = 0.0; rho <= 1.2; rho += 0.01) {
        CHECK(psi.phi(rho) >= 0.0);
        CHECK(psi.phi(rho) <= 1.0);
    }
    CHECK(psi.eta(0.0) == doctest::Approx(1.0));
    CHECK(psi.eta(-0.2) == doctest::Approx(1.0));
    CHECK(psi.eta(-1.0001) == 0.0);
    CHECK(psi.eta(0.5) == 0.0);

    const auto bounds = psi.measure_bounds();
    CHECK(std::isfinite(bounds.eta_prime));
    CHECK(std::isfinite(bounds.grad_phi_sqrt));
    CHECK(std::isfinite(bounds.grad_grad_phi_sqrt));
    CHECK(bounds.grad_phi_sqrt > 0.0);

    CHECK_THROWS_AS(CutoffPair(1.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(CutoffPair(0.7, 0.8), std::invalid_argument);
}

TEST_CASE("unit-normalized cutoff has unit L2 mass") {
    const CutoffPair zeta = CutoffPair::unit_normalized();
    // independent check with a trapezoid rule at a different resolution
    const int n = 20000;
    const double h = 1.0 / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double rho = k * h;
        const double f = rho * rho * zeta.phi(rho) * zeta.phi(rho);
        acc += (k == 0 || k == n) ? 0.5 * f : f;
    }
    const double mass = 4.0 * oracles::kPi * acc * h;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("nash inequality gap") {
    SUBCASE("constant functions achieve equality at zero") {
        const std::vector<double> f(10, 1.3);
        const std::vector<double> mu(10, 0.1);
        const NashGap gap = nash_gap(f, mu, 2.0);
        CHECK(gap.lhs == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(gap.rhs == doctest::Approx(0.0).epsilon(1e-14));
    }

    SUBCASE("two-valued function against frozen arithmetic") {
        const std::vector<double> f = {0.5, 1.5};
        const std::vector<double> mu = {0.5, 0.5};
        const NashGap gap = nash_gap(f, mu, 2.0);
        // int f dmu = 1, int ln f dmu = (ln .5 + ln 1.5)/2 = ln(.75)/2
        const double mean_ln = 0.5 * std::log(0.75);
        CHECK(gap.lhs == doctest::Approx(-mean_ln).epsilon(1e-12));
        const double g0 = std::log(0.5) - mean_ln;
        const double g1 = std::log(1.5) - mean_ln;
        const double rhs = 2.0 * std::sqrt(0.5 * (g0 * g0 + g1 * g1));
        CHECK(gap.rhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(gap.lhs <= gap.rhs);
    }

    SUBCASE("randomized property: lhs <= rhs") {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 32;
            std::vector<double> f(n), mu(n);
            double wsum = 0.0;
            for (int k = 0; k < n; ++k) {
                f[k] = 1e-3 + (2.0 - 1e-3) * uni(rng);
                mu[k] = 1e-6 + uni(rng);
                wsum += mu[k];
            }
            for (auto& w : mu) w /= wsum;
            const NashGap gap = nash_gap(f, mu, 2.0);
            CHECK(gap.lhs <= gap.rhs + 1e-12);
        }
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(nash_gap({0.0, 1.0}, {0.5, 0.5}, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(nash_gap({0.5, 1.0}, {0.6, 0.6}, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(nash_gap({0.5, 3.0}, {0.5, 0.5}, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(nash_gap({0.5, 1.0}, {0.5, 0.5}, 0.5), std::invalid_argument);
    }
}

TEST_CASE("weighted poincare ratio") {
    const CutoffPair zeta = CutoffPair::unit_normalized();

    SUBCASE("constant field gives zero") {
        const Grid g = make_grid(64, 64, 1.0, 1.0);
        const ScalarField c = ScalarField::from_function(g, Parity::even,
                                                         [](double, double) { return 5.0; });
        CHECK(weighted_poincare_ratio(c, zeta, 0.4, 0.5) == 0.0);
    }

    SUBCASE("sinusoid is finite and refinement-stable") {
        auto ratio_at = [&](int n) {
            const Grid g = make_grid(n, n, 1.0, 1.0);
            const double k = 2.0 * oracles::kPi / g.z_len;
            const ScalarField psi = ScalarField::from_function(
                g, Parity::even, [k](double, double z) { return std::sin(k * z); });
            return weighted_poincare_ratio(psi, zeta, 0.4, 0.5);
        };
        const double coarse = ratio_at(64);
        const double fine = ratio_at(128);
        CHECK(std::isfinite(coarse));
        CHECK(coarse > 0.0);
        CHECK(std::abs(fine - coarse) <= 0.05 * fine);
    }

    SUBCASE("suite maximum over smooth test functions is the empirical constant") {
        const Grid g = make_grid(64, 64, 1.0, 1.0);
        const double k = 2.0 * oracles::kPi / g.z_len;
        double suite_max = 0.0;
        int idx = 0;
        for (auto fn : {std::function<double(double, double)>(
                            [k](double, double z) { return std::sin(k * z); }),
                        std::function<double(double, double)>(
                            [k](double, double z) { return std::cos(2 * k * z); }),
                        std::function<double(double, double)>(
                            [](double r, double) { return r * r; }),
                        std::function<double(double, double)>(
                            [k](double r, double z) { return r * std::sin(k * z); })}) {
            const ScalarField psi = ScalarField::from_function(g, Parity::even, fn);
            const double ratio = weighted_poincare_ratio(psi, zeta, 0.4, 0.5);
            CHECK(std::isfinite(ratio));
            suite_max = std::max(suite_max, ratio);
            ++idx;
        }
        MESSAGE("empirical weighted-Poincare constant over suite: ", suite_max);
        CHECK(suite_max > 0.0);
    }
}

TEST_CASE("log transform residual") {
    const Grid g = make_grid(64, 64, 1.0, 1.0);
    const DriftDecomposition no_drift = DriftDecomposition::zero(g);

    SUBCASE("constant field has zero residual") {
        const ScalarField c = ScalarField::from_function(g, Parity::even,
                                                         [](double, double) { return 1.5; });
        const ScalarTrajectory traj = steady_trajectory(c, 0.0, 0.01, 4);
        const ScalarField res = log_transform_residual(traj, no_drift);
        CHECK(res.max_abs() <= 1e-12);
    }

    SUBCASE("steady Gaussian ansatz matches its analytic defect 4 r^2") {
        const ScalarField phi = ScalarField::from_function(
            g, Parity::even, [](double r, double) { return std::exp(-r * r); });
        const ScalarTrajectory traj = steady_trajectory(phi, 0.0, 0.01, 4);
        const ScalarField res = log_transform_residual(traj, no_drift);
        for (int i = 0; i < g.nr - 1; ++i) {
            const double r = g.radius(i);
            for (int j = 0; j < g.nz; ++j)
                CHECK(res.at(i, j) == doctest::Approx(4.0 * r * r).epsilon(1e-7));
        }
    }

    SUBCASE("solver-evolved positive data: residual shrinks under refinement") {
        auto residual_at = [](int n) {
            const Grid g = make_grid(n, n, 1.0, 1.0);
            const double k = 2.0 * oracles::kPi / g.z_len;
            GammaState s;
            s.gamma = ScalarField::from_function(g, Parity::even, [k](double r, double z) {
                return 1.0 + 0.5 * r * r * std::sin(k * z);
            });
            s.time = 0.0;
            GammaRunConfig cfg;
            cfg.end_time = 0.002;
            cfg.outer_bc = OuterBc::fixed;
            const GammaRunResult run = run_gamma(s, cfg);
            // evaluate on a trajectory thinned to consecutive snapshots
            const ScalarField res =
                log_transform_residual(run.trajectory, DriftDecomposition::zero(g));
            double worst = 0.0;
            for (int i = 0; i < g.nr - 1; ++i)
                for (int j = 0; j < g.nz; ++j) worst = std::max(worst, res.at(i, j));
            return worst;
        };
        const double r32 = residual_at(32);
        const double r64 = residual_at(64);
        MESSAGE("log-transform residual ", r32, " -> ", r64);
        CHECK(r64 < r32);
    }

    SUBCASE("floor violation is rejected") {
        const ScalarField tiny = ScalarField::from_function(
            g, Parity::even, [](double r, double) { return r < 0.5 ? 1.0 : 1e-12; });
        const ScalarTrajectory traj = steady_trajectory(tiny, 0.0, 0.01, 2);
        CHECK_THROWS_AS(log_transform_residual(traj, DriftDecomposition::zero(g), 1e-8),
                        std::runtime_error);
    }
}

TEST_CASE("lower bound check gates on the mass hypothesis") {
    const Grid g = make_grid(64, 64, 1.0, 1.0);
    const Anchor anchor{0.5, 0.0};
    const double R = 0.25;
    BlowdownConstants consts; // c0 = 0.1, delta = 0.05

    SUBCASE("unit field passes") {
        const ScalarField one = ScalarField::from_function(g, Parity::even,
                                                           [](double, double) { return 1.0; });
        const ScalarTrajectory traj = steady_trajectory(one, -0.1, 0.0, 100);
        const VerifierEntry e = lower_bound_check(traj, consts, R, anchor);
        CHECK(e.verdict == VerifierEntry::Verdict::pass);
        CHECK(e.rhs == doctest::Approx(1.0));
        CHECK(e.lhs == doctest::Approx(consts.delta / 2.0));
    }

    SUBCASE("mass failure reports the hypothesis, not a verdict") {
        // deep dip: essentially zero except a thin off-center shell
        const ScalarField dip = ScalarField::from_function(g, Parity::even, [](double r, double) {
            return (r > 0.9) ? 1.0 : 1e-6;
        });
        const ScalarTrajectory traj = steady_trajectory(dip, -0.1, 0.0, 100);
        const VerifierEntry e = lower_bound_check(traj, consts, R, anchor);
        CHECK(e.verdict == VerifierEntry::Verdict::hypothesis_failed);
    }

    SUBCASE("range precondition") {
        const ScalarField big = ScalarField::from_function(g, Parity::even,
                                                           [](double, double) { return 3.0; });
        const ScalarTrajectory traj = steady_trajectory(big, -0.1, 0.0, 100);
        CHECK_THROWS_AS(lower_bound_check(traj, consts, R, anchor), std::invalid_argument);
    }
}

TEST_CASE("Lp lower bound on the hollow cylinder") {
    const Grid g = make_grid(64, 64, 1.0, 1.0);
    const Anchor anchor{0.5, 0.0};
    const double R = 0.25;

    SUBCASE("constant two against the volume oracle") {
        const ScalarField two = ScalarField::from_function(g, Parity::even,
                                                           [](double, double) { return 2.0; });
        const ScalarTrajectory traj = steady_trajectory(two, -0.1, 0.0, 100);
        for (double p : {0.3, 0.5, 0.9}) {
            const VerifierEntry e = lp_lower_bound_check(traj, p, 2.0, R, anchor);
            CHECK(e.verdict == VerifierEntry::Verdict::pass);
            // |P(R, R/2)| = R^2 * (4 pi / 3)(R^3 - (R/2)^3)
            const double vol =
                R * R * (oracles::ball_volume(R) - oracles::ball_volume(R / 2.0));
            const double expected = std::pow(R, -5.0 / p) *
                                    std::pow(std::pow(2.0, p) * vol, 1.0 / p);
            CHECK(e.rhs == doctest::Approx(expected).epsilon(0.03));
        }
    }

    SUBCASE("nonconstant axis trace is rejected") {
        const double k = 2.0 * oracles::kPi / g.z_len;
        const ScalarField wavy = ScalarField::from_function(
            g, Parity::even, [k](double, double z) { return 1.5 + 0.3 * std::sin(k * z); });
        const ScalarTrajectory traj = steady_trajectory(wavy, -0.1, 0.0, 100);
        CHECK_THROWS_AS(lp_lower_bound_check(traj, 0.5, 1.5, R, anchor), std::invalid_argument);
    }
}

TEST_CASE("moser ladder") {
    const Grid g = make_grid(128, 128, 1.0, 1.0);
    const Anchor anchor{g.axial(g.nz / 2), 0.0};
    const double R = 0.25;

    SUBCASE("exponent recursion is exact") {
        const ScalarField one = ScalarField::from_function(g, Parity::even,
                                                           [](double, double) { return 1.0; });
        const ScalarTrajectory traj = steady_trajectory(one, -0.1, 0.0, 200);
        const MoserLadder ladder = moser_iterate(traj, R, 6, anchor);
        REQUIRE(ladder.rungs.size() == 7);
        std::int64_t num = 3, den = 1;
        for (const auto& rung : ladder.rungs) {
            CHECK(rung.p_num == num);
            CHECK(rung.p_den == den);
            num *= 10;
            den *= 9;
        }
        CHECK(ladder.rungs.front().radius == doctest::Approx(R));
        CHECK_THROWS_AS(moser_iterate(traj, R, 7, anchor), std::invalid_argument);
    }

    SUBCASE("zero data gives a zero ladder") {
        const ScalarTrajectory traj =
            steady_trajectory(ScalarField(g, Parity::even), -0.1, 0.0, 200);
        const MoserLadder ladder = moser_iterate(traj, R, 4, anchor);
        for (const auto& rung : ladder.rungs) CHECK(rung.lp_norm == 0.0);
        CHECK(ladder.running_constant == 0.0);
    }

    SUBCASE("r^2 rungs match the closed-form oracle and approach the sup") {
        const ScalarField r2 = ScalarField::from_function(
            g, Parity::even, [](double r, double) { return r * r; });
        const ScalarTrajectory traj = steady_trajectory(r2, -0.1, 0.0, 400);
        const MoserLadder ladder = moser_iterate(traj, R, 6, anchor);
        for (const auto& rung : ladder.rungs) {
            // iint_{P(R_j)} r^{2 p_j} = R_j^2 * closed-form ball integral
            const double expected = std::pow(
                rung.radius * rung.radius * oracles::ball_integral_r_pow(rung.radius,
                                                                         rung.exponent),
                1.0 / rung.exponent);
            CHECK(rung.lp_norm == doctest::Approx(expected).epsilon(0.05));
        }
        // normalized ladder is nonincreasing up to a modest constant
        CHECK(ladder.running_constant <= 1.05);

        // the last rung sits below the measured sup with a bounded gap
        double sup = 0.0;
        for (int i = 0; i < g.nr; ++i) {
            const double r = g.radius(i);
            if (r > R / 2.0) break;
            for (int j = 0; j < g.nz; ++j) {
                const double dzp = g.z_distance(g.axial(j), anchor.z0);
                if (r * r + dzp * dzp <= R * R / 4.0) sup = std::max(sup, r2.at(i, j));
            }
        }
        const double last = ladder.rungs.back().normalized;
        CHECK(last <= sup * 1.0001);
        CHECK((sup - last) / sup <= 0.20);
    }
}

TEST_CASE("mean value ratio") {
    const Grid g = make_grid(256, 256, 1.0, 1.0);
    const Anchor anchor{g.axial(g.nz / 2), 0.0};
    const double R = 0.25;

    SUBCASE("zero data gives zero") {
        const ScalarTrajectory traj =
            steady_trajectory(ScalarField(g, Parity::even), -0.1, 0.0, 64);
        CHECK(mean_value_ratio(traj, R, 3, anchor) == 0.0);
    }

    SUBCASE("r^2 against the quadrature oracle") {
        const ScalarField r2 = ScalarField::from_function(
            g, Parity::even, [](double r, double) { return r * r; });
        const ScalarTrajectory traj = steady_trajectory(r2, -0.1, 0.0, 64);
        const double ratio = mean_value_ratio(traj, R, 3, anchor);
        // sup = (R/2)^2, integral = R^2 (64 pi / 315) R^9
        const double oracle =
            0.25 * std::pow(315.0 / (64.0 * oracles::kPi), 1.0 / 3.0);
        CHECK(oracle == doctest::Approx(0.290).epsilon(0.002));
        CHECK(ratio == doctest::Approx(oracle).epsilon(0.05));
    }

    SUBCASE("scaling invariance under Gamma -> lambda Gamma") {
        const ScalarField f = ScalarField::from_function(
            g, Parity::even, [&](double r, double z) {
                return r * r * (1.0 + 0.3 * std::sin(2.0 * oracles::kPi * z / g.z_len));
            });
        ScalarField f2 = f;
        for (auto& v : f2.raw()) v *= 7.5;
        const ScalarTrajectory t1 = steady_trajectory(f, -0.1, 0.0, 64);
        const ScalarTrajectory t2 = steady_trajectory(f2, -0.1, 0.0, 64);
        const double r1 = mean_value_ratio(t1, R, 3, anchor);
        const double r2v = mean_value_ratio(t2, R, 3, anchor);
        CHECK(r1 == doctest::Approx(r2v).epsilon(1e-12));
    }
}

TEST_CASE("oscillation decay check") {
    const Grid g = make_grid(256, 256, 1.0, 1.0);
    const Anchor anchor{g.axial(g.nz / 2), 0.0};
    const DyadicScaleSet scales = make_dyadic_scales(0.25, 3);

    SUBCASE("zero data is vacuous") {
        const ScalarTrajectory traj =
            steady_trajectory(ScalarField(g, Parity::even), -0.1, 0.0, 40);
        const auto entries = oscillation_decay_check(traj, scales, 0.5, anchor);
        for (const auto& e : entries)
            CHECK(e.verdict == VerifierEntry::Verdict::vacuous);
    }

    SUBCASE("r^2 decays at ratio 1/4") {
        const ScalarField r2 = ScalarField::from_function(
            g, Parity::even, [](double r, double) { return r * r; });
        const ScalarTrajectory traj = steady_trajectory(r2, -0.1, 0.0, 40);
        const auto entries = oscillation_decay_check(traj, scales, 0.5, anchor);
        REQUIRE(entries.size() == 4); // 3 pairs + summary
        for (std::size_t k = 0; k + 1 < entries.size(); ++k) {
            CHECK(entries[k].verdict == VerifierEntry::Verdict::pass);
            CHECK(entries[k].ratio == doctest::Approx(0.25).epsilon(0.10));
        }
        CHECK(entries.back().verdict == VerifierEntry::Verdict::pass);
    }

    SUBCASE("ratios are invariant under affine maps of Gamma") {
        const ScalarField f = ScalarField::from_function(
            g, Parity::even, [&](double r, double z) {
                return r * r * (1.0 + 0.3 * std::cos(2.0 * oracles::kPi * z / g.z_len));
            });
        ScalarField f2 = f;
        for (auto& v : f2.raw()) v = -3.0 * v + 11.0;
        const auto e1 = oscillation_decay_check(steady_trajectory(f, -0.1, 0.0, 40), scales,
                                                0.5, anchor);
        const auto e2 = oscillation_decay_check(steady_trajectory(f2, -0.1, 0.0, 40), scales,
                                                0.5, anchor);
        REQUIRE(e1.size() == e2.size());
        for (std::size_t k = 0; k < e1.size(); ++k)
            if (e1[k].verdict != VerifierEntry::Verdict::vacuous)
                CHECK(e1[k].ratio == doctest::Approx(e2[k].ratio).epsilon(1e-12));
    }
}

TEST_CASE("phi normalization follows the sign test") {
    const Grid g = make_grid(64, 64, 1.0, 1.0);
    const Anchor anchor{0.5, 0.0};
    const ScalarField pos = ScalarField::from_function(g, Parity::even,
                                                       [](double r, double) { return r * r; });
    const ScalarTrajectory traj = steady_trajectory(pos, -0.1, 0.0, 20);
    double a = 0.0;
    const ScalarTrajectory phi = normalize_to_phi(traj, 0.25, anchor, &a);
    CHECK(a > 1.0);
    // inf over cells sits at r = dr/2 rather than 0, nudging a just above 2
    CHECK(a <= 2.0 + 4.0 * g.dr * g.dr / (0.25 * 0.25));
    // Phi in [0, 2] on the cylinder and the axis row sits near a
    const ScalarField& snap = phi.snapshot(0);
    for (int i = 0; i < g.nr; ++i) {
        const double r = g.radius(i);
        if (r > 0.25) break;
        for (int j = 0; j < g.nz; ++j) {
            const double dzp = g.z_distance(g.axial(j), anchor.z0);
            if (r * r + dzp * dzp > 0.25 * 0.25) continue;
            CHECK(snap.at(i, j) >= -1e-12);
            CHECK(snap.at(i, j) <= 2.0 + 1e-12);
        }
    }
}

TEST_CASE("verifier report plumbing") {
    VerifierReport rep;
    rep.add(make_bound_entry("ok", 1.0, 2.0, 0.0, 0.1));
    rep.add(make_bound_entry("bad", 3.0, 2.0, 0.0, 0.1));
    VerifierEntry v;
    v.name = "skipped";
    v.verdict = VerifierEntry::Verdict::vacuous;
    rep.add(v);
    CHECK(rep.failures() == 1);
    CHECK_FALSE(rep.all_passed());
    CHECK(rep.entries[0].verdict == VerifierEntry::Verdict::pass);

    // slack semantics: lhs <= rhs (1 + slack)
    const VerifierEntry s = make_bound_entry("slacked", 2.05, 2.0, 0.05, 0.0);
    CHECK(s.verdict == VerifierEntry::Verdict::pass);
}
