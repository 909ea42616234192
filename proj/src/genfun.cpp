#include "aubry/genfun.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aubry/errors.hpp"
#include "aubry/minplus.hpp"
#include "aubry/parallel.hpp"

namespace aubry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GeneratingFunction kicked_generating(std::string family, double k, double k2, double band_width) {
    if (!(k >= 0.0) || !(k2 >= 0.0)) throw std::invalid_argument("kick strengths must be >= 0");
    GeneratingFunction g;
    g.family = std::move(family);
    const double c1 = k / (kTwoPi * kTwoPi);
    const double c2 = k2 / (4.0 * kTwoPi * kTwoPi);
    g.value = [c1, c2](double x, double xp) {
        const double d = xp - x;
        return 0.5 * d * d - c1 * std::cos(kTwoPi * x) - c2 * std::cos(2.0 * kTwoPi * x);
    };
    g.d1 = [k, k2](double x, double xp) {
        return -(xp - x) + k / kTwoPi * std::sin(kTwoPi * x) +
               k2 / (2.0 * kTwoPi) * std::sin(2.0 * kTwoPi * x);
    };
    g.d2 = [](double x, double xp) { return xp - x; };
    g.theta = 1.0 + k + k2;
    g.rho_min = 1.0;
    g.rho_max = 1.0;
    g.band_width = band_width;
    const double kick = k / kTwoPi + k2 / (2.0 * kTwoPi);
    g.partial_bounds = [kick](double lo, double hi) {
        const double d = std::max(std::abs(lo), std::abs(hi));
        return std::pair<double, double>(d + kick, d);
    };
    return g;
}

struct Differences {
    double max_mixed = -std::numeric_limits<double>::infinity();
    double max_mixed2 = -std::numeric_limits<double>::infinity();
    double max_neg_mixed = 0.0;  // largest -mixed (adjacent)
    double max_second = -std::numeric_limits<double>::infinity();
    bool any = false;
};

Differences differences(const TabulatedH& t) {
    Differences r;
    const int n = t.n;
    auto v = [&](long a, long d) { return t(static_cast<int>(((a % n) + n) % n), d); };
    for (int a = 0; a < n; ++a) {
        for (long d = t.dmin; d <= t.dmax; ++d) {
            if (d - 1 >= t.dmin && d + 1 <= t.dmax) {
                const double m = v(a + 1, d) - v(a + 1, d - 1) - v(a, d + 1) + v(a, d);
                r.max_mixed = std::max(r.max_mixed, m);
                r.max_neg_mixed = std::max(r.max_neg_mixed, -m);
                const double sx = v(a - 1, d + 1) - 2.0 * v(a, d) + v(a + 1, d - 1);
                const double sxp = v(a, d - 1) - 2.0 * v(a, d) + v(a, d + 1);
                r.max_second = std::max({r.max_second, sx, sxp});
                r.any = true;
            }
            if (d - 2 >= t.dmin && d + 2 <= t.dmax) {
                const double m2 = v(a + 2, d) - v(a + 2, d - 2) - v(a, d + 2) + v(a, d);
                r.max_mixed2 = std::max(r.max_mixed2, m2);
            }
        }
    }
    return r;
}

// Largest Gauss-Legendre 8-point error per unit length for cells of size h,
// given a bound on the 16th derivative of the integrand.
double gauss8_error_per_length(double h, double d16) {
    using boost::math::factorial;
    const double c = std::pow(factorial<double>(8), 4) / (17.0 * std::pow(factorial<double>(16), 3));
    return c * std::pow(h, 16) * d16;
}

}  // namespace

GeneratingFunction fk_generating(double k, double band_width) {
    return kicked_generating("std", k, 0.0, band_width);
}

GeneratingFunction two_harmonic_generating(double k, double k2, double band_width) {
    return kicked_generating("two-harmonic", k, k2, band_width);
}

GeneratingFunction make_generating(const FamilySpec& spec, double band_width) {
    return spec.kind == FamilyKind::standard ? fk_generating(spec.k, band_width)
                                             : two_harmonic_generating(spec.k, spec.k2, band_width);
}

TabulatedH extract_generating_function(const TwistMapLift& map, int n, DisplacementRange band,
                                       double y_limit) {
    if (n < 2) throw std::invalid_argument("grid must have at least 2 nodes");
    if (band.lo > band.hi) throw std::invalid_argument("empty displacement band");

    const double reach = std::max(std::abs(band.lo), std::abs(band.hi)) / static_cast<double>(n);
    const double y_span = std::min(y_limit, reach + map.kick_bound + 2.0);
    // Twist bound a = min dx'/dy and momentum slope bound over the region in use.
    double a = std::numeric_limits<double>::infinity();
    double dyp_dy = 0.0;
    for (int i = 0; i <= 64; ++i) {
        for (int j = 0; j <= 64; ++j) {
            const Jacobian jac = map.jacobian(i / 64.0, -y_span + 2.0 * y_span * j / 64.0);
            a = std::min(a, jac[0][1]);
            dyp_dy = std::max(dyp_dy, std::abs(jac[1][1]));
        }
    }
    if (!(a > 0.0)) throw TwistViolation("dx'/dy is not positive on the sampled annulus");

    constexpr double kYTol = 1e-12;
    auto solve_y = [&](double x, double xp) {
        const double y0 = xp - x;
        const double r = std::abs(map(x, y0).x - xp);
        double lo = y0 - r / a - 1.0;
        double hi = y0 + r / a + 1.0;
        if (!(map(x, lo).x <= xp && map(x, hi).x >= xp))
            throw TwistViolation("x' is not monotone in y near the root");
        while (hi - lo > kYTol) {
            const double mid = 0.5 * (lo + hi);
            if (map(x, mid).x < xp) lo = mid; else hi = mid;
        }
        const double y = 0.5 * (lo + hi);
        if (std::abs(y) > y_limit) throw BandExceeded("momentum leaves the solvable region");
        if (!(map.jacobian(x, y)[0][1] > 0.0)) throw TwistViolation("dx'/dy <= 0 at a root");
        return y;
    };

    using Gauss = boost::math::quadrature::gauss<double, 8>;
    const double h = 1.0 / n;

    // Bottom edge: int_0^{a/n} d1h(t, 0) dt, where d1h = -y.
    std::vector<double> bottom_cells(n);
    parallel_for(n, [&](std::size_t c) {
        const double t0 = c * h;
        bottom_cells[c] = Gauss::integrate([&](double t) { return -solve_y(t, 0.0); }, t0, t0 + h);
    });
    std::vector<double> bottom(n, 0.0);
    for (int c = 1; c < n; ++c) bottom[c] = bottom[c - 1] + bottom_cells[c - 1];

    TabulatedH t;
    t.n = n;
    t.dmin = band.lo;
    t.dmax = band.hi;
    t.values.assign(static_cast<std::size_t>(n) * t.width(), 0.0);
    std::vector<double> lip_rows(n, 0.0);

    parallel_for(n, [&](std::size_t ai) {
        const long row = static_cast<long>(ai);
        const double x = row * h;
        const long jlo = row + band.lo, jhi = row + band.hi;
        const long clo = std::min(0L, jlo), chi = std::max(0L, jhi);
        // cells[c - clo] = int over [c/n, (c+1)/n] of d2h(x, t) = y'(x, t)
        std::vector<double> cells(static_cast<std::size_t>(chi - clo), 0.0);
        for (long c = clo; c < chi; ++c) {
            const double t0 = c * h;
            cells[c - clo] = Gauss::integrate(
                [&](double s) { return map(x, solve_y(x, s)).y; }, t0, t0 + h);
        }
        // prefix[j - clo] = int_0^{j/n}
        std::vector<double> prefix(static_cast<std::size_t>(chi - clo + 1), 0.0);
        for (long j = 1; j <= chi; ++j) prefix[j - clo] = prefix[j - 1 - clo] + cells[j - 1 - clo];
        for (long j = -1; j >= clo; --j) prefix[j - clo] = prefix[j + 1 - clo] - cells[j - clo];
        double* out = t.values.data() + ai * t.width();
        for (long j = jlo; j <= jhi; ++j) out[j - jlo] = bottom[ai] + prefix[j - clo];

        double lip = 0.0;
        for (long j : {jlo, jhi}) {
            const double y = solve_y(x, j * h);
            lip = std::max(lip, std::abs(y) + std::abs(map(x, y).y));
        }
        lip_rows[ai] = lip;
    });

    t.steps = 1;
    t.lip = *std::max_element(lip_rows.begin(), lip_rows.end());
    const double path = 1.0 + reach + 1.0;
    const double d16 = map.partial_derivative_bound ? map.partial_derivative_bound(16) : 0.0;
    const double cells = n * path;
    double vmax = 0.0;
    for (double v : t.values) vmax = std::max(vmax, std::abs(v));
    t.value_error = path * (gauss8_error_per_length(h, d16) + 0.5 * kYTol * std::max(1.0, dyp_dy)) +
                    cells * std::numeric_limits<double>::epsilon() * (vmax + t.lip);
    t.policy = BandPolicy{static_cast<double>(band.lo) / n, static_cast<double>(band.hi) / n, 0};

    const Differences diff = differences(t);
    if (diff.any) {
        const double n2 = static_cast<double>(n) * n;
        t.theta = std::max(0.0, diff.max_second) * n2;
        t.curvature = t.theta + diff.max_neg_mixed * n2;
    }
    return t;
}

ConditionReport verify_h_conditions(const TabulatedH& table, double tol) {
    if (table.width() <= 2 || table.n <= 0) throw std::invalid_argument("band too narrow to verify");
    const Differences diff = differences(table);
    if (diff.max_mixed > tol)
        throw NonMongeInput("mixed difference " + std::to_string(diff.max_mixed) + " exceeds tolerance");
    const double n2 = static_cast<double>(table.n) * table.n;
    ConditionReport r;
    r.h1 = true;  // structural for tables
    r.h1_residual = 0.0;
    r.max_mixed = diff.max_mixed;
    r.max_mixed_coarse = diff.max_mixed2;
    r.theta_certified = std::max(0.0, diff.max_second) * n2;
    r.rho_min_certified = table.width() > 4 ? -diff.max_mixed2 * n2 / 4.0 : -diff.max_mixed * n2;
    r.h3 = diff.max_mixed <= tol && (table.width() > 4 ? diff.max_mixed2 < 0.0 : diff.max_mixed < 0.0);
    r.h5 = r.rho_min_certified > 0.0;
    r.h6 = std::isfinite(r.theta_certified) &&
           (std::isnan(table.theta) || (r.theta_certified - table.theta) / n2 <= tol);
    return r;
}

ConditionReport verify_h_conditions(const GeneratingFunction& h, double tol, int n) {
    const long reach = static_cast<long>(std::floor(h.band_width)) * n;
    TabulatedH t = tabulate(h, n, DisplacementRange{-reach, reach});
    t.theta = h.theta;
    ConditionReport r = verify_h_conditions(t, tol);
    double residual = 0.0;
    for (int a = 0; a < n; ++a) {
        const double x = static_cast<double>(a) / n;
        for (long d = -reach; d <= reach; d += std::max(1L, reach / 16)) {
            const double xp = x + static_cast<double>(d) / n;
            residual = std::max(residual, std::abs(h(x + 1.0, xp + 1.0) - h(x, xp)));
        }
    }
    r.h1_residual = residual;
    r.h1 = residual <= std::max(tol, 1e-12);
    return r;
}

}  // namespace aubry
