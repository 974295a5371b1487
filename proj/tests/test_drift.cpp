#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "axilab/drift.hpp"
#include "axilab/norms.hpp"
#include "oracles.hpp"

using namespace axilab;

namespace {
const Grid kGrid = make_grid(64, 64, 1.0, 1.0);
}

TEST_CASE("b3 = (c/r) e_z") {
    const DriftDecomposition zero = make_b3_scaled(kGrid, 0.0);
    CHECK(zero.b3->vz.max_abs() == 0.0);

    const DriftDecomposition d = make_b3_scaled(kGrid, 1.0);
    for (int i = 0; i < kGrid.nr; ++i)
        for (int j = 0; j < kGrid.nz; ++j)
            CHECK(kGrid.radius(i) * d.b3->vz.at(i, j) == doctest::Approx(1.0).epsilon(1e-14));

    const DriftDecomposition d25 = make_b3_scaled(kGrid, 2.5);
    CHECK(sup_r_abs(*d25.b3) == doctest::Approx(2.5).epsilon(1e-12));

    CHECK(max_abs_divergence(*d.b3) <= 1e-12);
    CHECK_THROWS_AS(make_b3_scaled(kGrid, -1.0), std::invalid_argument);
}

TEST_CASE("b2 from stream function") {
    SUBCASE("zero stream") {
        const ScalarField B(kGrid, Parity::odd);
        const DriftDecomposition d = make_b2_from_stream(B);
        CHECK(d.b2->vr.max_abs() == 0.0);
        CHECK(d.b2->vz.max_abs() == 0.0);
    }

    SUBCASE("B = r gives constant axial flow") {
        const ScalarField B = ScalarField::from_function(kGrid, Parity::odd,
                                                         [](double r, double) { return r; });
        const DriftDecomposition d = make_b2_from_stream(B);
        for (int i = 0; i < kGrid.nr; ++i)
            for (int j = 0; j < kGrid.nz; ++j) {
                CHECK(d.b2->vz.at(i, j) == doctest::Approx(2.0).epsilon(1e-13));
                CHECK(d.b2->vr.at(i, j) == doctest::Approx(0.0));
            }
    }

    SUBCASE("B = r sin(2 pi z / L): symbolic curl and exact divergence") {
        const double k = 2.0 * oracles::kPi / kGrid.z_len;
        const ScalarField B = ScalarField::from_function(
            kGrid, Parity::odd, [k](double r, double z) { return r * std::sin(k * z); });
        const DriftDecomposition d = make_b2_from_stream(B);
        // centered d_z carries the sin(k dz)/(k dz) factor
        const double zfac = std::sin(k * kGrid.dz) / (k * kGrid.dz);
        for (int i = 0; i < kGrid.nr; i += 7)
            for (int j = 0; j < kGrid.nz; j += 5) {
                const double r = kGrid.radius(i), z = kGrid.axial(j);
                CHECK(d.b2->vr.at(i, j) ==
                      doctest::Approx(-k * r * std::cos(k * z) * zfac).epsilon(1e-10));
                CHECK(d.b2->vz.at(i, j) ==
                      doctest::Approx(2.0 * std::sin(k * z)).epsilon(1e-10));
            }
        CHECK(max_abs_divergence(*d.b2) <= 1e-12);
    }

    SUBCASE("parity is enforced") {
        const ScalarField bad(kGrid, Parity::even);
        CHECK_THROWS_AS(make_b2_from_stream(bad), std::invalid_argument);
    }
}

TEST_CASE("b1 shell field") {
    SUBCASE("zero amplitude") {
        const DriftDecomposition d = make_b1_shell(kGrid, 0.0, 0.25, 0.5);
        CHECK(d.b1->vr.max_abs() == 0.0);
        CHECK(d.b1->vz.max_abs() == 0.0);
    }

    SUBCASE("support and exact divergence") {
        const DriftDecomposition d = make_b1_shell(kGrid, 1.0, 0.25, 0.5);
        CHECK(max_abs_divergence(*d.b1) <= 1e-12);
        const double z0 = 0.5 * kGrid.z_len;
        const double pad = 2.5 * std::max(kGrid.dr, kGrid.dz);
        for (int i = 0; i < kGrid.nr; ++i)
            for (int j = 0; j < kGrid.nz; ++j) {
                const double r = kGrid.radius(i);
                const double s = std::sqrt(r * r + (kGrid.axial(j) - z0) * (kGrid.axial(j) - z0));
                if (s < 0.25 - pad || s > 0.5 + pad) {
                    CHECK(d.b1->vr.at(i, j) == 0.0);
                    CHECK(d.b1->vz.at(i, j) == 0.0);
                }
            }
        // nontrivial inside
        CHECK(d.b1->vz.max_abs() > 0.1);
    }

    SUBCASE("bad shell bounds") {
        CHECK_THROWS_AS(make_b1_shell(kGrid, 1.0, 0.5, 0.25), std::invalid_argument);
        CHECK_THROWS_AS(make_b1_shell(kGrid, 1.0, 0.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(make_b1_shell(kGrid, 1.0, 0.25, 1.5), std::invalid_argument);
    }
}

TEST_CASE("compose records parts and sums divergence-free") {
    const Grid g = kGrid;
    const DriftDecomposition z = DriftDecomposition::zero(g);
    const DriftDecomposition zz = compose(z, z, z);
    CHECK(zz.empty());
    CHECK(zz.total().vr.max_abs() == 0.0);

    const DriftDecomposition shell = make_b1_shell(g, 1.0, 0.25, 0.5);
    const DriftDecomposition b3 = make_b3_scaled(g, 1.0);
    const DriftDecomposition both = compose(shell, DriftDecomposition::zero(g), b3);
    CHECK(max_abs_divergence(both.total()) <= 1e-10);

    // decompose accessors return the original parts bitwise
    REQUIRE(both.b1);
    REQUIRE(both.b3);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            CHECK(both.b1->vz.at(i, j) == shell.b1->vz.at(i, j));
            CHECK(both.b3->vz.at(i, j) == b3.b3->vz.at(i, j));
        }

    const Grid other = make_grid(32, 32, 1.0, 1.0);
    const DriftDecomposition wrong = make_b3_scaled(other, 1.0);
    CHECK_THROWS_AS(compose(shell, DriftDecomposition::zero(g), wrong), std::invalid_argument);
}

TEST_CASE("divergence stencil identities") {
    const Grid g = kGrid;

    VectorFieldCyl ez(g);
    ez.vz = ScalarField::from_function(g, Parity::even, [](double, double) { return 1.0; });
    CHECK(max_abs_divergence(ez) == 0.0);

    VectorFieldCyl radial(g);
    radial.vr = ScalarField::from_function(g, Parity::odd, [](double r, double) { return r; });
    const ScalarField div = divergence(radial);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            CHECK(div.at(i, j) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("drift spec builds composed fields") {
    DriftSpec spec;
    spec.b1 = DriftSpec::B1Shell{1.0, 0.25, 0.5};
    spec.b2 = DriftSpec::B2Stream{0.5, 1};
    spec.b3 = DriftSpec::B3Scaled{1.0};
    const DriftDecomposition d = spec.build(kGrid);
    REQUIRE(d.b1);
    REQUIRE(d.b2);
    REQUIRE(d.b3);
    REQUIRE(d.stream_B);
    CHECK(max_abs_divergence(d.total()) <= 1e-10);
}
