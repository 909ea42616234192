#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace aubry {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Row-major 2x2 Jacobian: [[dx'/dx, dx'/dy], [dy'/dx, dy'/dy]].
using Jacobian = std::array<std::array<double, 2>, 2>;

/// Built-in exact-symplectic families. Both are kicked shears
///   x' = x + y + F(x),  y' = y + F(x)
/// with F(x) = (k/2pi) sin(2pi x) + (k2/4pi) sin(4pi x).
enum class FamilyKind { standard, two_harmonic };

struct FamilySpec {
    FamilyKind kind = FamilyKind::standard;
    double k = 0.0;
    double k2 = 0.0;

    FamilySpec with_k(double new_k) const {
        FamilySpec s = *this;
        s.k = new_k;
        return s;
    }
};

std::string family_name(FamilyKind kind);
FamilyKind parse_family(const std::string& name);

/// A lift of a monotone twist map of the cylinder, with Jacobian access.
struct TwistMapLift {
    std::string family;
    std::vector<double> params;
    std::function<Point(double, double)> evaluate;
    std::function<Jacobian(double, double)> jacobian;
    /// sup_x |x' - x - y|, the horizontal kick size.
    double kick_bound = 0.0;
    /// A-priori bound on the r-th t-derivative of the generating-function
    /// partials recovered from this lift (used for quadrature error bounds).
    std::function<double(int)> partial_derivative_bound;

    Point operator()(double x, double y) const { return evaluate(x, y); }
};

/// Half-height K of the compact annulus S^1 x [-K, K].
struct Annulus {
    double K = 3.0;
};

TwistMapLift standard_map_family(double k);
TwistMapLift two_harmonic_family(double k, double k2);
TwistMapLift make_lift(const FamilySpec& spec);

struct C1Distance {
    double sampled = 0.0;         ///< max over the sample grid (a lower bound)
    double lipschitz_inflation = 0.0;  ///< slack covering the gaps between samples
};

/// Sampled C^1 distance over [0,1] x [-K,K]: values and all Jacobian entries.
C1Distance c1_distance_report(const TwistMapLift& a, const TwistMapLift& b, const Annulus& ann,
                              int samples_per_unit = 256);
double c1_distance(const TwistMapLift& a, const TwistMapLift& b, const Annulus& ann,
                   int samples_per_unit = 256);

/// Annulus whose K-2 sub-annulus contains every minimal orbit with rotation
/// number in [omega_min, omega_max].
Annulus choose_annulus(const TwistMapLift& map, double omega_min, double omega_max);

}  // namespace aubry
