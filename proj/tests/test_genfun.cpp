#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aubry/errors.hpp"
#include "aubry/genfun.hpp"
#include "aubry/minplus.hpp"

using namespace aubry;

namespace {

double max_node_error(const TabulatedH& t, const GeneratingFunction& h) {
    const double offset = h(0.0, 0.0);
    double e = 0.0;
    for (int a = 0; a < t.n; ++a)
        for (long d = t.dmin; d <= t.dmax; ++d) {
            const double exact = h(static_cast<double>(a) / t.n, static_cast<double>(a + d) / t.n) - offset;
            e = std::max(e, std::abs(t(a, d) - exact));
        }
    return e;
}

}  // namespace

TEST_CASE("closed-form family") {
    CHECK(fk_generating(0.0)(0.2, 0.7) == doctest::Approx(0.125).epsilon(1e-15));
    const GeneratingFunction h = fk_generating(1.0);
    CHECK(h.theta == 2.0);
    CHECK(h.rho_min == 1.0);
    CHECK(two_harmonic_generating(1.0, 0.5).theta == 2.5);
    for (double x : {-0.3, 0.0, 0.45})
        for (double xp : {-1.0, 0.2, 2.5}) CHECK(std::abs(h(x + 1.0, xp + 1.0) - h(x, xp)) < 1e-13);
    // partials against central differences
    const double e = 1e-6;
    CHECK(std::abs(h.d1(0.3, 0.9) - (h(0.3 + e, 0.9) - h(0.3 - e, 0.9)) / (2 * e)) < 1e-7);
    CHECK(std::abs(h.d2(0.3, 0.9) - (h(0.3, 0.9 + e) - h(0.3, 0.9 - e)) / (2 * e)) < 1e-7);
}

TEST_CASE("extraction reproduces the integrable parabola") {
    const TabulatedH t = extract_generating_function(standard_map_family(0.0), 128, {-128, 128});
    CHECK(max_node_error(t, fk_generating(0.0)) <= 1e-10);
    CHECK(t.value_error <= 1e-10);
}

TEST_CASE("extraction reproduces the kicked family") {
    const TabulatedH t = extract_generating_function(standard_map_family(1.0), 256, {-256, 256});
    const double err = max_node_error(t, fk_generating(1.0));
    CHECK(err <= 1e-8);
    CHECK(err <= t.value_error + 1e-12);
    const TabulatedH u = extract_generating_function(two_harmonic_family(0.6, 0.3), 64, {-64, 64});
    CHECK(max_node_error(u, two_harmonic_generating(0.6, 0.3)) <= 1e-8);
}

TEST_CASE("a shear without twist is rejected") {
    TwistMapLift flat;
    flat.family = "flat";
    flat.evaluate = [](double x, double y) { return Point{x, y}; };
    flat.jacobian = [](double, double) { return Jacobian{{{1.0, 0.0}, {0.0, 1.0}}}; };
    CHECK_THROWS_AS(extract_generating_function(flat, 16, {-16, 16}), TwistViolation);
}

TEST_CASE("twist conditions of the closed form") {
    const double tol = 1e-9;
    const ConditionReport r = verify_h_conditions(fk_generating(1.0), tol);
    CHECK(r.h1);
    CHECK(r.h3);
    CHECK(r.h5);
    CHECK(r.h6);
    CHECK(r.theta_certified <= 2.0 + tol);
    CHECK(r.rho_min_certified >= 1.0 - tol);
}

TEST_CASE("twist conditions survive conjunction") {
    const double tol = 1e-9;
    const TabulatedH t = tabulate(fk_generating(1.0), 64, BandPolicy{0.0, 0.0, 3});
    const TabulatedH h = power_conjunction(t, 2, 1);
    const ConditionReport r = verify_h_conditions(h, tol);
    CHECK(r.h3);
    CHECK(r.h5);
    CHECK(r.h6);
    CHECK(r.theta_certified <= 2.0 + tol);
}

TEST_CASE("a sign-flipped mixed difference is rejected") {
    TabulatedH t = tabulate(fk_generating(1.0), 32, DisplacementRange{-32, 32});
    t.values[5 * t.width() + 40] += 0.01;
    CHECK_THROWS_AS(verify_h_conditions(t, 1e-9), NonMongeInput);
}
