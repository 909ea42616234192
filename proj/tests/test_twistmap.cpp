#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aubry/twistmap.hpp"

using namespace aubry;

TEST_CASE("standard map images") {
    const Point a = standard_map_family(0.0)(0.2, 0.3);
    CHECK(a.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a.y == doctest::Approx(0.3).epsilon(1e-15));
    const Point b = standard_map_family(1.0)(0.0, 0.5);
    CHECK(b.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b.y == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("lift commutes with the deck translation") {
    for (double k : {0.0, 0.7, 1.3}) {
        const TwistMapLift f = two_harmonic_family(k, 0.3);
        for (double x : {-0.4, 0.1, 0.77})
            for (double y : {-1.5, 0.2, 2.0}) {
                const Point p = f(x, y), q = f(x + 1.0, y);
                CHECK(std::abs(q.x - p.x - 1.0) < 1e-13);
                CHECK(std::abs(q.y - p.y) < 1e-13);
            }
    }
}

TEST_CASE("jacobian matches central differences and is symplectic") {
    const TwistMapLift f = two_harmonic_family(1.1, 0.4);
    const double e = 1e-6;
    for (double x : {0.05, 0.3, 0.81}) {
        const double y = 0.4;
        const Jacobian j = f.jacobian(x, y);
        const Point px = f(x + e, y), mx = f(x - e, y), py = f(x, y + e), my = f(x, y - e);
        CHECK(std::abs(j[0][0] - (px.x - mx.x) / (2 * e)) < 1e-6);
        CHECK(std::abs(j[1][0] - (px.y - mx.y) / (2 * e)) < 1e-6);
        CHECK(std::abs(j[0][1] - (py.x - my.x) / (2 * e)) < 1e-6);
        CHECK(std::abs(j[1][1] - (py.y - my.y) / (2 * e)) < 1e-6);
        CHECK(std::abs(j[0][0] * j[1][1] - j[0][1] * j[1][0] - 1.0) < 1e-14);
    }
}

TEST_CASE("c1 distance within the family") {
    const Annulus ann{5.0};
    CHECK(c1_distance(standard_map_family(0.8), standard_map_family(0.8), ann) == 0.0);
    // the dx'/dx entry differs by dk cos(2 pi x), which peaks at x = 0
    CHECK(c1_distance(standard_map_family(0.5), standard_map_family(0.6), ann) ==
          doctest::Approx(0.1).epsilon(1e-5));
    CHECK(c1_distance(standard_map_family(0.0), standard_map_family(0.01), ann) ==
          doctest::Approx(0.01).epsilon(1e-4));
    const C1Distance r = c1_distance_report(standard_map_family(0.5), standard_map_family(0.6), ann);
    CHECK(r.lipschitz_inflation >= 0.0);
}

TEST_CASE("annulus choice") {
    CHECK(choose_annulus(standard_map_family(1.0), 0.0, 1.0).K == 5.0);
    CHECK(choose_annulus(standard_map_family(0.0), 0.0, 1.0).K == 5.0);
    CHECK(choose_annulus(standard_map_family(0.0), 0.0, 0.0).K >= 3.0);
    // K - 2 covers |y| <= |omega| + 1 + k / 2 pi
    for (double k : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double reach = 1.0 + 1.0 + k / (2.0 * std::numbers::pi);
        CHECK(choose_annulus(standard_map_family(k), 0.0, 1.0).K - 2.0 >= reach);
    }
}

TEST_CASE("family names") {
    CHECK(parse_family("std") == FamilyKind::standard);
    CHECK(parse_family("two-harmonic") == FamilyKind::two_harmonic);
    CHECK(family_name(FamilyKind::two_harmonic) == "two-harmonic");
    CHECK_THROWS_AS(parse_family("henon"), std::invalid_argument);
}
