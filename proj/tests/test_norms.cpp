#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "axilab/drift.hpp"
#include "axilab/norms.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace axilab;

namespace {

// analytic curl of the shell stream profile, for the quadrature oracle
struct ShellField {
    double A, r_in, r_out, z0;

    double q(double u) const {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        const double w = u * (1.0 - u);
        return 64.0 * w * w * w;
    }
    double dq(double u) const {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        const double w = u * (1.0 - u);
        return 64.0 * 3.0 * w * w * (1.0 - 2.0 * u);
    }
    double speed_sq(double r, double z) const {
        const double s = std::sqrt(r * r + (z - z0) * (z - z0));
        if (s <= r_in || s >= r_out || s == 0.0) {
            const double u0 = (s - r_in) / (r_out - r_in);
            const double bz0 = 2.0 * A * q(u0);
            return bz0 * bz0;
        }
        const double u = (s - r_in) / (r_out - r_in);
        const double du = 1.0 / (r_out - r_in);
        const double br = -A * r * dq(u) * du * (z - z0) / s;
        const double bz = 2.0 * A * q(u) + A * r * dq(u) * du * r / s;
        return br * br + bz * bz;
    }
};

} // namespace

TEST_CASE("dyadic scale sets") {
    CHECK_THROWS_AS(make_dyadic_scales(0.25, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_dyadic_scales(-1.0, 3), std::invalid_argument);
    const DyadicScaleSet s = make_dyadic_scales(0.25, 3);
    const auto radii = s.radii();
    REQUIRE(radii.size() == 4);
    CHECK(radii[0] == doctest::Approx(0.25));
    CHECK(radii[3] == doctest::Approx(0.03125));

    const Grid g = make_grid(64, 64, 1.0, 1.0);
    CHECK_NOTHROW(validate_scales(s, g));
    CHECK_THROWS_AS(validate_scales(make_dyadic_scales(0.5, 3), g), std::invalid_argument);
}

TEST_CASE("hollowed scaled energy of the unit axial field") {
    // (1/R) Vol(B_2R \ B_R/8) peaks at R = 1 with value (4 pi / 3)(8 - 1/512)
    const Grid g = make_grid(256, 256, 4.0, 4.0);
    VectorFieldCyl ez(g);
    ez.vz = ScalarField::from_function(g, Parity::even, [](double, double) { return 1.0; });
    const DyadicScaleSet scales = make_dyadic_scales(1.0, 3);
    const double hse = hollowed_scaled_energy(ez, scales, 2.0);
    const double expected = 4.0 * oracles::kPi / 3.0 * (8.0 - 1.0 / 512.0);
    CHECK(hse == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("hollowed scaled energy of a shell against the quadrature oracle") {
    const Grid g = make_grid(128, 128, 1.0, 1.0);
    const double z0 = 0.5;
    const DriftDecomposition d = make_b1_shell(g, 1.0, 0.25, 0.5, z0);
    const DyadicScaleSet scales = make_dyadic_scales(0.25, 3);
    const double hse = hollowed_scaled_energy(*d.b1, scales, z0);

    const ShellField shell{1.0, 0.25, 0.5, z0};
    double oracle = 0.0;
    for (double R : scales.radii()) {
        const double e = oracles::shell_quadrature(
                             R / 8.0, 2.0 * R, z0,
                             [&](double r, double z) { return shell.speed_sq(r, z); }, 1024) /
                         R;
        oracle = std::max(oracle, e);
    }
    CHECK(hse == doctest::Approx(oracle).epsilon(0.03));

    const DriftDecomposition z = make_b1_shell(g, 0.0, 0.25, 0.5, z0);
    CHECK(hollowed_scaled_energy(*z.b1, scales, z0) == 0.0);
}

TEST_CASE("bmo seminorm basics") {
    const Grid g = make_grid(64, 128, 1.0, 2.0);
    const ScalarField c = ScalarField::from_function(g, Parity::even,
                                                     [](double, double) { return 42.0; });
    CHECK(bmo_seminorm(c) == 0.0);
}

TEST_CASE("bmo of the log singularity is refinement-stable") {
    auto make_log = [](const Grid& g) {
        const double z0 = 0.5 * g.z_len;
        const double floor = 0.5 * g.dr;
        return ScalarField::from_function(g, Parity::even, [=, &g](double r, double z) {
            const double dzp = g.z_distance(z, z0);
            return std::log(std::max(std::sqrt(r * r + dzp * dzp), floor));
        });
    };
    const Grid g64 = make_grid(64, 128, 1.0, 2.0);
    const Grid g128 = make_grid(128, 256, 1.0, 2.0);
    const double coarse = bmo_seminorm(make_log(g64));
    const double fine = bmo_seminorm(make_log(g128));
    CHECK(coarse > 0.0);
    CHECK(std::isfinite(coarse));
    CHECK(std::abs(fine - coarse) <= 0.10 * fine);
}

TEST_CASE("bmo of a linear profile scales with the family cap") {
    auto make_linear = [](const Grid& g) {
        return ScalarField::from_function(g, Parity::even, [](double, double z) { return z; });
    };
    const Grid small = make_grid(64, 128, 1.0, 2.0);
    const Grid big = make_grid(64, 128, 2.0, 4.0);
    const double s_small = bmo_seminorm(make_linear(small));
    const double s_big = bmo_seminorm(make_linear(big));
    // the sup dominates the clean linear balls of the largest family radius
    const double rho_small = 0.5 * std::min(small.r_max, 0.5 * small.z_len);
    CHECK(s_small >= 0.9 * oracles::linear_mean_oscillation(1.0, rho_small));
    // doubling every length doubles the estimator (linear growth in the cap)
    CHECK(s_big / s_small == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("sup r|b3| and e-norm attribution") {
    const Grid g = make_grid(64, 64, 1.0, 1.0);
    VectorFieldCyl zero(g);
    CHECK(sup_r_abs(zero) == 0.0);

    const DriftDecomposition b3 = make_b3_scaled(g, 1.0);
    CHECK(sup_r_abs(*b3.b3) == doctest::Approx(1.0).epsilon(1e-12));

    const DyadicScaleSet scales = make_dyadic_scales(0.25, 3);
    const ENormReport zero_rep = e_norm(DriftDecomposition::zero(g), scales, 0.5);
    CHECK(zero_rep.total == 0.0);

    const ENormReport b3_rep = e_norm(b3, scales, 0.5);
    CHECK(b3_rep.hse == 0.0);
    CHECK(b3_rep.bmo == 0.0);
    CHECK(b3_rep.total == doctest::Approx(1.0).epsilon(1e-12));

    DriftSpec spec;
    spec.b1 = DriftSpec::B1Shell{1.0, 0.25, 0.5};
    spec.b2 = DriftSpec::B2Stream{0.5, 1};
    spec.b3 = DriftSpec::B3Scaled{2.0};
    const DriftDecomposition all = spec.build(g);
    const ENormReport rep = e_norm(all, scales, 0.5);
    // attribution: the b3 component reads the (c/r) part only
    CHECK(rep.sup_rb3 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.hse > 0.0);
    CHECK(rep.bmo > 0.0);
    CHECK(rep.total == doctest::Approx(rep.hse + rep.bmo + rep.sup_rb3).epsilon(1e-15));
}

namespace {

ScalarTrajectory steady_trajectory(const ScalarField& f, double t0, double t1, int n) {
    ScalarTrajectory traj;
    auto ptr = std::make_shared<const ScalarField>(f);
    for (int k = 0; k <= n; ++k) traj.append(t0 + (t1 - t0) * k / n, ptr);
    return traj;
}

} // namespace

TEST_CASE("oscillation profile of r^2 and zero data") {
    const Grid g = make_grid(256, 256, 1.0, 1.0);
    const DyadicScaleSet scales = make_dyadic_scales(0.25, 3);
    const double z0 = g.axial(g.nz / 2);

    const ScalarTrajectory zero = steady_trajectory(ScalarField(g, Parity::even), -0.1, 0.0, 40);
    const OscillationProfile zp = oscillation_profile(zero, scales, z0, 0.0);
    for (const auto& e : zp.entries) CHECK(e.J == 0.0);

    const ScalarField r2 = ScalarField::from_function(g, Parity::even,
                                                      [](double r, double) { return r * r; });
    const ScalarTrajectory traj = steady_trajectory(r2, -0.1, 0.0, 40);
    const OscillationProfile prof = oscillation_profile(traj, scales, z0, 0.0);
    REQUIRE(prof.entries.size() == 4);
    for (const auto& e : prof.entries) {
        CHECK(e.J == doctest::Approx(e.R * e.R).epsilon(0.05));
        CHECK(e.m >= 0.0);
    }
    // nesting is exact
    for (std::size_t k = 0; k + 1 < prof.entries.size(); ++k)
        CHECK(prof.entries[k + 1].J <= prof.entries[k].J);
}

TEST_CASE("oscillation nesting is exact for generic data") {
    const Grid g = make_grid(64, 64, 1.0, 1.0);
    const ScalarField f = ScalarField::from_function(g, Parity::even, [](double r, double z) {
        return std::sin(13.0 * r) * std::cos(7.0 * z) + 0.3 * r;
    });
    const ScalarTrajectory traj = steady_trajectory(f, -0.1, 0.0, 20);
    const DyadicScaleSet scales = make_dyadic_scales(0.25, 4);
    const OscillationProfile prof = oscillation_profile(traj, scales, g.axial(g.nz / 2), 0.0);
    for (std::size_t k = 0; k + 1 < prof.entries.size(); ++k) {
        CHECK(prof.entries[k + 1].J <= prof.entries[k].J);
        CHECK(prof.entries[k + 1].m >= prof.entries[k].m);
        CHECK(prof.entries[k + 1].M <= prof.entries[k].M);
    }
}

TEST_CASE("holder fit") {
    SUBCASE("r^2 profile gives alpha near 2") {
        const Grid g = make_grid(256, 256, 1.0, 1.0);
        const ScalarField r2 = ScalarField::from_function(
            g, Parity::even, [](double r, double) { return r * r; });
        const ScalarTrajectory traj = steady_trajectory(r2, -0.066, 0.0, 660);
        const DyadicScaleSet scales = make_dyadic_scales(0.25, 3);
        const OscillationProfile prof =
            oscillation_profile(traj, scales, g.axial(g.nz / 2), 0.0);
        const HolderFit fit = holder_fit(prof);
        CHECK(fit.alpha == doctest::Approx(2.0).epsilon(0.05));
    }

    SUBCASE("synthetic geometric profile recovers the exponent exactly") {
        const double theta = 0.37;
        OscillationProfile prof;
        for (int j = 0; j <= 4; ++j) {
            OscillationEntry e;
            e.R = 0.25 * std::pow(0.5, j);
            e.M = std::pow(theta, j);
            e.m = 0.0;
            e.J = e.M;
            e.plane_cells = 1000;
            e.snapshots = 10;
            prof.entries.push_back(e);
        }
        const HolderFit fit = holder_fit(prof);
        CHECK(fit.alpha == doctest::Approx(std::log2(1.0 / theta)).epsilon(1e-6));
        CHECK(fit.residual <= 1e-10);
    }

    SUBCASE("flat profile gives alpha near 0") {
        OscillationProfile prof;
        for (int j = 0; j <= 4; ++j) {
            OscillationEntry e;
            e.R = 0.25 * std::pow(0.5, j);
            e.M = 1.0;
            e.J = 1.0;
            e.plane_cells = 1000;
            e.snapshots = 10;
            prof.entries.push_back(e);
        }
        CHECK(std::abs(holder_fit(prof).alpha) <= 1e-12);
    }

    SUBCASE("degenerate and undersized profiles") {
        OscillationProfile zeros;
        for (int j = 0; j <= 4; ++j) {
            OscillationEntry e;
            e.R = 0.25 * std::pow(0.5, j);
            e.plane_cells = 1000;
            e.snapshots = 10;
            zeros.entries.push_back(e);
        }
        CHECK(std::isinf(holder_fit(zeros).alpha));

        OscillationProfile thin;
        for (int j = 0; j <= 4; ++j) {
            OscillationEntry e;
            e.R = 0.25 * std::pow(0.5, j);
            e.J = 1.0;
            e.plane_cells = j < 2 ? 1000 : 2; // only two usable scales
            e.snapshots = 10;
            thin.entries.push_back(e);
        }
        CHECK_THROWS(holder_fit(thin));
    }
}

TEST_CASE("john-nirenberg ratios for the log singularity") {
    auto make_log = [](const Grid& g) {
        const double z0 = 0.5 * g.z_len;
        const double floor = 0.5 * g.dr;
        return ScalarField::from_function(g, Parity::even, [=, &g](double r, double z) {
            const double dzp = g.z_distance(z, z0);
            return std::log(std::max(std::sqrt(r * r + dzp * dzp), floor));
        });
    };
    const Grid g64 = make_grid(64, 128, 1.0, 2.0);
    const Grid g128 = make_grid(128, 256, 1.0, 2.0);
    const double z0 = 1.0, R = 0.5;

    const double r2_coarse = john_nirenberg_ratio(make_log(g64), 2.0, R, z0);
    const double r2_fine = john_nirenberg_ratio(make_log(g128), 2.0, R, z0);
    const double r6_coarse = john_nirenberg_ratio(make_log(g64), 6.0, R, z0);
    const double r6_fine = john_nirenberg_ratio(make_log(g128), 6.0, R, z0);

    CHECK(std::isfinite(r2_coarse));
    CHECK(std::isfinite(r6_coarse));
    CHECK(std::abs(r2_fine - r2_coarse) <= 0.15 * r2_fine);
    CHECK(std::abs(r6_fine - r6_coarse) <= 0.15 * r6_fine);
    // higher p weights the tails harder; report the ordering
    MESSAGE("JN ratios: p=2 ", r2_fine, ", p=6 ", r6_fine);

    const Grid g = make_grid(64, 64, 1.0, 1.0);
    const ScalarField c = ScalarField::from_function(g, Parity::even,
                                                     [](double, double) { return 1.0; });
    CHECK_THROWS_AS(john_nirenberg_ratio(c, 2.0, 0.25, 0.5), std::domain_error);
}

TEST_CASE("scale invariance of the drift norms under the zoom map") {
    // b(x) -> Q b(Q x) with Q = 2, realized on a halved grid
    const int n = 128;
    const Grid g1 = make_grid(n, n, 1.0, 1.0);
    const Grid g2 = make_grid(n, n, 0.5, 0.5);

    SUBCASE("sup r |b3| is exactly invariant") {
        const DriftDecomposition d1 = make_b3_scaled(g1, 1.7);
        const DriftDecomposition d2 = make_b3_scaled(g2, 1.7); // Q c / (Q r) = c / r
        CHECK(sup_r_abs(*d1.b3) == doctest::Approx(sup_r_abs(*d2.b3)).epsilon(1e-12));
    }

    SUBCASE("hollowed scaled energy is invariant within quadrature error") {
        const DriftDecomposition d1 = make_b1_shell(g1, 1.0, 0.25, 0.5, 0.5);
        const DriftDecomposition d2 = make_b1_shell(g2, 2.0, 0.125, 0.25, 0.25);
        const double h1 = hollowed_scaled_energy(*d1.b1, make_dyadic_scales(0.25, 3), 0.5);
        const double h2 = hollowed_scaled_energy(*d2.b1, make_dyadic_scales(0.125, 3), 0.25);
        CHECK(h2 == doctest::Approx(h1).epsilon(0.03));
    }

    SUBCASE("stream BMO is invariant within family granularity") {
        const double k1 = 2.0 * oracles::kPi / g1.z_len;
        const ScalarField B1 = ScalarField::from_function(
            g1, Parity::odd, [k1](double r, double z) { return r * std::sin(k1 * z); });
        // B'(x) = B(2x) on the halved domain
        const double k2 = 2.0 * oracles::kPi / g2.z_len;
        const ScalarField B2 = ScalarField::from_function(
            g2, Parity::odd, [k2](double r, double z) { return 2.0 * r * std::sin(k2 * z); });
        const double s1 = bmo_seminorm(B1);
        const double s2 = bmo_seminorm(B2);
        CHECK(s2 == doctest::Approx(s1).epsilon(0.10));
    }
}
