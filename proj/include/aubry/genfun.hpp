#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "aubry/table.hpp"
#include "aubry/twistmap.hpp"

namespace aubry {

/// Closed-form variational principle h(x, x') with its partials and the
/// constants of the twist conditions.
struct GeneratingFunction {
    std::string family;
    std::function<double(double, double)> value;
    std::function<double(double, double)> d1;
    std::function<double(double, double)> d2;
    double theta = 1.0;    ///< (h6theta) constant
    double rho_min = 1.0;  ///< lower bound of -d12 h
    double rho_max = 1.0;  ///< upper bound of |d12 h|
    double band_width = 6.0;  ///< validity window |x' - x| <= W
    /// Bounds (sup|d1 h|, sup|d2 h|) over displacements in [lo, hi] circles.
    std::function<std::pair<double, double>(double, double)> partial_bounds;

    double operator()(double x, double xp) const { return value(x, xp); }
};

/// h(x,x') = (x'-x)^2/2 - (k/4pi^2) cos(2pi x), theta = 1 + k, rho = 1.
GeneratingFunction fk_generating(double k, double band_width = 6.0);
/// Adds -(k2/16pi^2) cos(4pi x); theta = 1 + k + k2.
GeneratingFunction two_harmonic_generating(double k, double k2, double band_width = 6.0);
GeneratingFunction make_generating(const FamilySpec& spec, double band_width = 6.0);

/// Numerical generating function of a lift, normalized to h(0,0) = 0, via
/// h(x,x') = int_0^x d1h(t,0) dt + int_0^x' d2h(x,t) dt with the partials
/// recovered from y = -d1 h by bisection in y. Node errors are bounded by
/// the returned table's value_error.
TabulatedH extract_generating_function(const TwistMapLift& map, int n, DisplacementRange band,
                                       double y_limit = std::numeric_limits<double>::infinity());

struct ConditionReport {
    bool h1 = false;
    bool h3 = false;
    bool h5 = false;
    bool h6 = false;
    double h1_residual = 0.0;
    double max_mixed = 0.0;         ///< largest adjacent mixed difference
    double max_mixed_coarse = 0.0;  ///< same over quadruples two nodes apart
    double theta_certified = 0.0;
    double rho_min_certified = 0.0;
};

/// Finite-difference check of (h1), (h3), (h5), (h6theta) on the grid.
/// Throws NonMongeInput if a mixed difference exceeds tol. Composed tables
/// are only weakly Monge on adjacent nodes (tied intermediate nodes give
/// exact zeros), so strictness and rho are read off quadruples two nodes
/// apart. theta is compared in second-difference units: pass iff
/// (theta_certified - theta) / n^2 <= tol.
ConditionReport verify_h_conditions(const TabulatedH& table, double tol = 1e-9);
ConditionReport verify_h_conditions(const GeneratingFunction& h, double tol = 1e-9, int n = 128);

}  // namespace aubry
