#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "aubry/orbits.hpp"
#include "oracles.hpp"

using namespace aubry;

namespace {

const FamilySpec fk(double k) { return FamilySpec{FamilyKind::standard, k, 0.0}; }

Configuration periodic_extension(const Configuration& c, long p, long periods) {
    const long q = static_cast<long>(c.size()) - 1;
    Configuration out;
    out.n = c.n;
    for (long r = 0; r < periods; ++r)
        for (long i = 0; i < q; ++i) {
            out.nodes.push_back(c.nodes[i] + r * p * c.n);
            out.x.push_back(static_cast<double>(out.nodes.back()) / c.n);
        }
    out.nodes.push_back(c.nodes[0] + periods * p * c.n);
    out.x.push_back(static_cast<double>(out.nodes.back()) / c.n);
    return out;
}

double action(const TabulatedH& t, const Configuration& c) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i) s += t.lift_value(c.nodes[i], c.nodes[i + 1]);
    return s;
}

}  // namespace

TEST_CASE("fixed point at the potential minimum") {
    const TabulatedH t = window_table(fk(1.0), 64, rational_window(0, 1));
    const Configuration c = minimal_periodic_orbit(t, 0, 1);
    CHECK(c.x == std::vector<double>{0.0, 0.0});
}

TEST_CASE("integrable period two orbit is evenly spaced") {
    const TabulatedH t = window_table(fk(0.0), 64, rational_window(1, 2));
    const Configuration c = minimal_periodic_orbit(t, 1, 2);
    REQUIRE(c.size() == 3);
    CHECK(c.x[1] - c.x[0] == 0.5);
    CHECK(c.x[2] - c.x[1] == 0.5);
}

TEST_CASE("period five orbit against dynamic programming over all 5-cycles") {
    const int n = 64;
    const TabulatedH t = window_table(fk(1.0), n, rational_window(2, 5));
    const Configuration c = minimal_periodic_orbit(t, 2, 5);
    double best = std::numeric_limits<double>::infinity();
    long arg = 0;
    for (long a = 0; a < n; ++a) {
        const double v = oracle::periodic_min_dp(t, 2, 5, a).value;
        if (v < best - 1e-13) {
            best = v;
            arg = a;
        }
    }
    CHECK(std::abs(action(t, c) - best) < 1e-12);
    CHECK(c.nodes.front() == arg);
    CHECK(rotation_number(c) == 0.4);
    const std::vector<double> col = power_column(t, 5, 2 * n);
    CHECK(std::abs(action(t, c) - *std::min_element(col.begin(), col.end())) < 1e-12);
}

TEST_CASE("rotation number of a progression") {
    Configuration c;
    for (int i = 0; i < 10; ++i) c.x.push_back(0.3 + 0.618 * i);
    CHECK(rotation_number(c) == doctest::Approx(0.618).epsilon(1e-14));
}

TEST_CASE("rotation and Bangert estimates on minimal segments") {
    const int n = 64;
    for (double k : {0.0, 0.5, 1.0, 1.5})
        for (auto [p, q] : {std::pair<long, long>{0, 1}, {1, 2}, {1, 3}, {2, 5}, {3, 8}}) {
            const TabulatedH t = window_table(fk(k), n, rational_window(p, q));
            const Configuration orbit = minimal_periodic_orbit(t, p, q);
            const Configuration c = periodic_extension(orbit, p, 3);
            const double w = static_cast<double>(p) / q;
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = i + 1; j < c.size(); ++j)
                    CHECK(std::abs(c.x[j] - c.x[i] - (j - i) * w) < 1.0 + 2.0 / n);

            const std::vector<const TabulatedH*> chain(2 * q + 1, &t);
            const long x0 = 5;
            const Configuration seg = backtrack_minimal_segment(chain, x0, x0 + 2 * p * n + n / 3);
            const double alpha = rotation_number(seg);
            for (std::size_t i = 0; i < seg.size(); ++i)
                for (std::size_t j = i + 1; j < seg.size(); ++j)
                    CHECK(std::abs(seg.x[j] - seg.x[i] - (j - i) * alpha) < 2.0);
        }
}

TEST_CASE("crossings") {
    Configuration a;
    a.x = {0.0, 0.4, 0.8, 1.2};
    Configuration b = a;
    for (double& v : b.x) v += 1.0;
    CHECK(crossing_count(a, b) == 0);
    CHECK(crossing_count(a, a) == 0);

    Configuration zig, zag;
    zig.x = {0.0, 1.0, 0.0, 1.0};
    zag.x = {0.5, 0.5, 0.5, 0.5};
    CHECK(crossing_count(zig, zag) == 3);
    zig.x = {0.0, 1.0, 0.0};
    zag.x = {0.5, 0.5, 0.5};
    CHECK(crossing_count(zig, zag) == 2);
    Configuration touch, line;
    touch.x = {0.0, 0.5, 0.0};
    line.x = {0.5, 0.5, 0.5};
    CHECK(crossing_count(touch, line) == 0);
    Configuration through;
    through.x = {0.0, 0.5, 1.0};
    CHECK(crossing_count(through, line) == 1);
    Configuration end;
    end.x = {0.5, 0.0, 0.0};
    CHECK(crossing_count(end, line) == 1);
}

TEST_CASE("minimal orbits from distinct basins cross at most once") {
    const int n = 64;
    const TabulatedH t = window_table(fk(1.0), n, rational_window(2, 5));
    const std::vector<double> col = power_column(t, 5, 2 * n);
    std::vector<Configuration> orbits;
    for (long a = 0; a < n; ++a) {
        const double l = col[(a + n - 1) % n], r = col[(a + 1) % n];
        if (col[a] <= l && col[a] <= r) {
            const std::vector<const TabulatedH*> chain(5, &t);
            orbits.push_back(periodic_extension(backtrack_minimal_segment(chain, a, a + 2 * n), 2, 2));
        }
    }
    CHECK(orbits.size() >= 2);
    for (std::size_t i = 0; i < orbits.size(); ++i)
        for (std::size_t j = i + 1; j < orbits.size(); ++j) CHECK(crossing_count(orbits[i], orbits[j]) <= 1);
}

TEST_CASE("Aubry set approximations") {
    const int n = 256;
    const BarrierProfile flat = barrier_rational(window_table(fk(0.0), n, rational_window(0, 1)), 0, 1);
    CHECK(mather_set_points(flat, 0.0).size() == static_cast<std::size_t>(n));

    const BarrierProfile b = barrier_rational(window_table(fk(1.0), n, rational_window(0, 1)), 0, 1);
    const std::vector<long> pts = mather_set_points(b, 1e-9);
    CHECK(std::find(pts.begin(), pts.end(), 0L) != pts.end());
    for (long a : pts) CHECK(std::min(a, n - a) <= n / 50);
    std::size_t last = n + 1;
    for (double slack : {1e-2, 1e-3, 1e-5, 0.0}) {
        const std::size_t size = mather_set_points(b, slack).size();
        CHECK(size <= last);
        last = size;
    }
}
