#include "aubry/twistmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aubry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TwistMapLift kicked_shear(std::string family, double k, double k2) {
    if (!(k >= 0.0) || !(k2 >= 0.0)) throw std::invalid_argument("kick strengths must be >= 0");
    TwistMapLift lift;
    lift.family = std::move(family);
    lift.params = {k, k2};
    auto kick = [k, k2](double x) {
        return k / kTwoPi * std::sin(kTwoPi * x) + k2 / (2.0 * kTwoPi) * std::sin(2.0 * kTwoPi * x);
    };
    auto kick_slope = [k, k2](double x) {
        return k * std::cos(kTwoPi * x) + k2 * std::cos(2.0 * kTwoPi * x);
    };
    lift.evaluate = [kick](double x, double y) {
        const double yp = y + kick(x);
        return Point{x + yp, yp};
    };
    lift.jacobian = [kick_slope](double x, double /*y*/) {
        const double s = kick_slope(x);
        return Jacobian{{{1.0 + s, 1.0}, {s, 1.0}}};
    };
    lift.kick_bound = k / kTwoPi + k2 / (2.0 * kTwoPi);
    // d1h(t,0) = t + F(t) and d2h(x,t) = t - x: only F contributes beyond order 1.
    lift.partial_derivative_bound = [k, k2](int order) {
        if (order <= 0) return 1.0;
        if (order == 1) return 1.0 + k + k2;
        return k / kTwoPi * std::pow(kTwoPi, order) +
               k2 / (2.0 * kTwoPi) * std::pow(2.0 * kTwoPi, order);
    };
    return lift;
}

}  // namespace

std::string family_name(FamilyKind kind) {
    return kind == FamilyKind::standard ? "std" : "two-harmonic";
}

FamilyKind parse_family(const std::string& name) {
    if (name == "std" || name == "standard") return FamilyKind::standard;
    if (name == "two-harmonic") return FamilyKind::two_harmonic;
    throw std::invalid_argument("unknown map family '" + name + "'");
}

TwistMapLift standard_map_family(double k) { return kicked_shear("std", k, 0.0); }

TwistMapLift two_harmonic_family(double k, double k2) {
    return kicked_shear("two-harmonic", k, k2);
}

TwistMapLift make_lift(const FamilySpec& spec) {
    return spec.kind == FamilyKind::standard ? standard_map_family(spec.k)
                                             : two_harmonic_family(spec.k, spec.k2);
}

C1Distance c1_distance_report(const TwistMapLift& a, const TwistMapLift& b, const Annulus& ann,
                              int samples_per_unit) {
    if (samples_per_unit < 64) throw std::invalid_argument("samples_per_unit must be >= 64");
    const int nx = samples_per_unit;
    const int ny = static_cast<int>(std::ceil(2.0 * ann.K * samples_per_unit));
    const double hx = 1.0 / nx;
    const double hy = 2.0 * ann.K / ny;

    // diff[j*(nx+1)+i]: largest component difference at sample (i, j)
    std::vector<double> diff(static_cast<std::size_t>(nx + 1) * (ny + 1));
    double sup = 0.0;
    for (int j = 0; j <= ny; ++j) {
        const double y = -ann.K + j * hy;
        for (int i = 0; i <= nx; ++i) {
            const double x = i * hx;
            const Point pa = a(x, y), pb = b(x, y);
            const Jacobian ja = a.jacobian(x, y), jb = b.jacobian(x, y);
            double d = std::max(std::abs(pa.x - pb.x), std::abs(pa.y - pb.y));
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) d = std::max(d, std::abs(ja[r][c] - jb[r][c]));
            diff[static_cast<std::size_t>(j) * (nx + 1) + i] = d;
            sup = std::max(sup, d);
        }
    }
    // Empirical Lipschitz constant of the difference field between neighbours.
    double lip = 0.0;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const double d = diff[static_cast<std::size_t>(j) * (nx + 1) + i];
            if (i < nx) lip = std::max(lip, std::abs(diff[static_cast<std::size_t>(j) * (nx + 1) + i + 1] - d) / hx);
            if (j < ny) lip = std::max(lip, std::abs(diff[static_cast<std::size_t>(j + 1) * (nx + 1) + i] - d) / hy);
        }
    }
    return C1Distance{sup, lip * 0.5 * std::hypot(hx, hy)};
}

double c1_distance(const TwistMapLift& a, const TwistMapLift& b, const Annulus& ann,
                   int samples_per_unit) {
    return c1_distance_report(a, b, ann, samples_per_unit).sampled;
}

Annulus choose_annulus(const TwistMapLift& map, double omega_min, double omega_max) {
    if (omega_min > omega_max) throw std::invalid_argument("omega_min > omega_max");
    // Minimal orbits have |x_{i+1} - x_i - omega| < 1, and y = (x' - x) - F(x).
    const double momentum = std::max(std::abs(omega_min), std::abs(omega_max)) + 1.0 + map.kick_bound;
    return Annulus{std::max(3.0, std::floor(momentum) + 3.0)};
}

}  // namespace aubry
