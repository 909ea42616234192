#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace aubry {

/// Inclusive displacement range in grid nodes.
struct DisplacementRange {
    long lo = 0;
    long hi = 0;
};

/// Band bookkeeping for clipping after conjunction, in circle units.
/// A table composed of factors with per-factor rotation windows carries
/// the Minkowski sum of those windows as its core; its band is
/// [floor(core_lo) - margin, ceil(core_hi) + margin] circles.
struct BandPolicy {
    double core_lo = 0.0;
    double core_hi = 0.0;
    int margin = 1;

    DisplacementRange nodes(int n) const {
        return {static_cast<long>(std::floor(core_lo) - margin) * n,
                static_cast<long>(std::ceil(core_hi) + margin) * n};
    }
};

/// Grid representation of a variational principle on the lifted plane:
/// values[a * width() + (d - dmin)] = h(a/n, (a + d)/n) for a in [0, n) and
/// d in [dmin, dmax]. Periodicity h(x+1, x'+1) = h(x, x') is structural.
struct TabulatedH {
    int n = 0;
    long dmin = 0;
    long dmax = -1;
    std::vector<double> values;
    /// Number of elementary h-steps composed into this table.
    long steps = 1;
    /// Lipschitz bound |d1 h| + |d2 h| of the elementary h on its band.
    double lip = std::numeric_limits<double>::infinity();
    /// Twist constant shared by every factor (conjunction keeps it).
    double theta = std::numeric_limits<double>::quiet_NaN();
    /// Upper bound on the Hessian row sums of the elementary h (theta + rho_max).
    double curvature = std::numeric_limits<double>::quiet_NaN();
    /// Bound on node-value error of the elementary table (quadrature etc.).
    double value_error = 0.0;
    BandPolicy policy;

    long width() const { return dmax - dmin + 1; }
    bool in_band(long d) const { return d >= dmin && d <= dmax; }

    const double* row(int a) const { return values.data() + static_cast<std::size_t>(a) * width(); }

    double operator()(int a, long d) const { return row(a)[d - dmin]; }

    /// h(j/n, jp/n) for lift node indices; +inf outside the band.
    double lift_value(long j, long jp) const {
        const long d = jp - j;
        if (!in_band(d)) return std::numeric_limits<double>::infinity();
        const long a = ((j % n) + n) % n;
        return (*this)(static_cast<int>(a), d);
    }
};

/// Finite segment (x_start, ..., x_end) of a configuration in lift
/// coordinates. Grid configurations also keep their node indices.
struct Configuration {
    long start = 0;
    std::vector<double> x;
    std::vector<long> nodes;
    int n = 0;

    long end() const { return start + static_cast<long>(x.size()) - 1; }
    std::size_t size() const { return x.size(); }
};

}  // namespace aubry
