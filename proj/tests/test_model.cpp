#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "arraylight/drive.hpp"
#include "arraylight/geometry.hpp"

using namespace arraylight;

TEST_CASE("unit round trips to 12 significant digits") {
    const PhysicalParams p;
    CHECK(p.nm_from_length(p.length_from_nm(660.0)) == doctest::Approx(660.0).epsilon(1e-12));
    CHECK(p.MHz_from_rate(p.rate_from_MHz(3.0)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(p.ns_from_time(p.time_from_ns(75.0)) == doctest::Approx(75.0).epsilon(1e-12));
    CHECK(p.lambda_nm == 780.0);
    CHECK(p.Gamma_rad_s == doctest::Approx(2.0 * pi * 6.0e6));
    CHECK_THROWS(PhysicalParams(-1.0, 1.0));
}

TEST_CASE("hex arrays") {
    SUBCASE("N7: six sites at distance d from center") {
        const auto a = build_hex_array(Layout::N7, 0.85);
        REQUIRE(a.size() == 7);
        for (int k = 1; k < 7; ++k)
            CHECK(std::hypot(a.positions[k][0], a.positions[k][1]) ==
                  doctest::Approx(0.85).epsilon(1e-12));
        CHECK(a.spacing == doctest::Approx(0.85).epsilon(1e-12));
    }
    SUBCASE("N19 at 660 nm has nearest-neighbor spacing 0.85 lambda") {
        const PhysicalParams p;
        const auto a = build_hex_array(Layout::N19, p.length_from_nm(660.0));
        REQUIRE(a.size() == 19);
        CHECK(p.nm_from_length(a.spacing) == doctest::Approx(660.0).epsilon(1e-12));
        CHECK(a.spacing == doctest::Approx(660.0 / 780.0).epsilon(1e-12));
    }
    SUBCASE("N13 pairwise distances match brute force expectations") {
        const double d = 1.0;
        const auto a = build_hex_array(Layout::N13, d);
        REQUIRE(a.size() == 13);
        std::set<long> dist;  // rounded to 1e-9
        for (int i = 0; i < 13; ++i)
            for (int j = i + 1; j < 13; ++j) {
                const double dx = a.positions[i][0] - a.positions[j][0];
                const double dy = a.positions[i][1] - a.positions[j][1];
                dist.insert(std::lround(std::hypot(dx, dy) * 1e9));
            }
        CHECK(dist.count(std::lround(d * 1e9)) == 1);
        CHECK(dist.count(std::lround(std::sqrt(3.0) * d * 1e9)) == 1);
        CHECK(dist.count(std::lround(2.0 * d * 1e9)) == 1);
        CHECK(a.spacing == doctest::Approx(d).epsilon(1e-12));
    }
    SUBCASE("60-degree rotation symmetry") {
        for (const Layout lay : {Layout::N7, Layout::N13, Layout::N19}) {
            const auto a = build_hex_array(lay, 0.7);
            const double c = std::cos(pi / 3.0), s = std::sin(pi / 3.0);
            for (const auto& p : a.positions) {
                const Vec2 rot{c * p[0] - s * p[1], s * p[0] + c * p[1]};
                bool found = false;
                for (const auto& q : a.positions)
                    if (std::hypot(rot[0] - q[0], rot[1] - q[1]) < 1e-9) found = true;
                CHECK(found);
            }
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS(build_hex_array(Layout::N7, -1.0));
        CHECK_THROWS(build_hex_array(Layout::File, 1.0));
    }
}

TEST_CASE("coordinates file") {
    const PhysicalParams p;
    const char* path = "test_coords.tmp";
    SUBCASE("nm input with comments") {
        std::ofstream(path) << "# two atoms\n0 0\n660 0  # second\n\n";
        const auto a = load_array_file(path, p);
        REQUIRE(a.size() == 2);
        CHECK(a.positions[1][0] == doctest::Approx(660.0 / 780.0));
    }
    SUBCASE("non-planar input rejected") {
        std::ofstream(path) << "0 0 0\n";
        CHECK_THROWS_WITH_AS(load_array_file(path, p),
                             doctest::Contains("non-planar"), std::runtime_error);
    }
    SUBCASE("duplicates rejected") {
        std::ofstream(path) << "0 0\n0 0\n";
        CHECK_THROWS(load_array_file(path, p));
    }
    SUBCASE("missing file / empty file") {
        CHECK_THROWS(load_array_file("does_not_exist.tmp", p));
        std::ofstream(path) << "# nothing\n";
        CHECK_THROWS(load_array_file(path, p));
    }
    std::remove(path);
}

TEST_CASE("gaussian weight") {
    CHECK(gaussian_weight({0.0, 0.0}, 1.3) == 1.0);
    CHECK(gaussian_weight({1.3, 0.0}, 1.3) == doctest::Approx(std::exp(-1.0)));
    CHECK(gaussian_weight({1.3, 1.3}, 1.3) == doctest::Approx(std::exp(-2.0)));
    CHECK_THROWS(gaussian_weight({0.0, 0.0}, 0.0));
}

TEST_CASE("derive_drive") {
    const PhysicalParams p;
    AtomArray one;
    one.positions.push_back({0.0, 0.0});
    one.finalize();

    SUBCASE("fig5 photon flux: |alpha|^2 = 4.6e6 / s") {
        const auto d = derive_drive(p.rate_from_MHz(1.0), p.length_from_nm(900.0), one);
        CHECK(p.per_s_from_rate(d.photon_flux()) == doctest::Approx(4.6e6).epsilon(0.02));
        CHECK(d.A_beam / d.A_atom == doctest::Approx(4.4).epsilon(0.01));
    }
    SUBCASE("fig6 photon flux: |alpha|^2 ~ 1.6e6 / s") {
        // the quoted 6.3 A_atom / 1.6e6 are rounded; pi^2 (w0/lambda)^2 / 3
        // gives 6.54 exactly at w0 = 1.1 um
        const auto d = derive_drive(p.rate_from_MHz(0.5), p.length_from_nm(1100.0), one);
        CHECK(p.per_s_from_rate(d.photon_flux()) == doctest::Approx(1.6e6).epsilon(0.08));
        CHECK(d.A_beam / d.A_atom ==
              doctest::Approx(pi * pi * (1100.0 / 780.0) * (1100.0 / 780.0) / 3.0)
                  .epsilon(1e-12));
    }
    SUBCASE("w0 = 430 nm: A_beam = A_atom, vartheta = 1/4, g = 1/2") {
        const auto d = derive_drive(1.0, p.length_from_nm(430.0), one);
        CHECK(d.A_beam == doctest::Approx(d.A_atom).epsilon(2e-3));
        CHECK(d.vartheta == doctest::Approx(0.25).epsilon(2e-3));
        CHECK(d.g == doctest::Approx(0.5).epsilon(1e-3));
    }
    SUBCASE("|Omega| = 2 g |alpha| exactly; f weights") {
        AtomArray two;
        two.positions = {{0.0, 0.0}, {1.2, 0.0}};
        two.finalize();
        const auto d = derive_drive(Complex(0.0, -0.37), 1.2, two);
        CHECK(2.0 * d.g * std::abs(d.alpha) == doctest::Approx(0.37).epsilon(1e-14));
        CHECK(d.f[0] == 1.0);
        CHECK(d.f[1] == doctest::Approx(std::exp(-1.0)));
    }
}

TEST_CASE("divergence angle") {
    const PhysicalParams p;
    CHECK(divergence_angle(p.length_from_nm(900.0)) == doctest::Approx(0.2759).epsilon(1e-3));
    CHECK(divergence_angle(p.length_from_nm(1100.0)) == doctest::Approx(0.2257).epsilon(1e-3));
    CHECK(divergence_angle(1e9) < 1e-9);
    // paper's quoted degrees
    CHECK(divergence_angle(p.length_from_nm(900.0)) * 180.0 / pi ==
          doctest::Approx(15.8).epsilon(0.01));
    CHECK(divergence_angle(p.length_from_nm(1100.0)) * 180.0 / pi ==
          doctest::Approx(12.9).epsilon(0.01));
}

TEST_CASE("polarization vector is unit norm") {
    const auto u = AtomArray::circular_polarization();
    double n = 0.0;
    for (const auto& c : u) n += std::norm(c);
    CHECK(n == doctest::Approx(1.0).epsilon(1e-15));
}
