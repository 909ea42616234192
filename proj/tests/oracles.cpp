#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long mod(long a, long n) { return ((a % n) + n) % n; }

TabulatedH blank(int n, aubry::DisplacementRange band, const BandPolicy& policy) {
    TabulatedH t;
    t.n = n;
    t.dmin = band.lo;
    t.dmax = band.hi;
    t.values.assign(static_cast<std::size_t>(n) * t.width(), kInf);
    t.policy = policy;
    return t;
}

double& at(TabulatedH& t, long a, long d) {
    return t.values[static_cast<std::size_t>(a) * t.width() + (d - t.dmin)];
}

BandPolicy scaled(const BandPolicy& p, long s) {
    return BandPolicy{p.core_lo * s, p.core_hi * s, p.margin};
}

}  // namespace

TabulatedH random_monge(int n, const BandPolicy& policy, std::mt19937_64& rng, int noise) {
    const auto band = policy.nodes(n);
    TabulatedH t = blank(n, band, policy);
    std::uniform_int_distribution<int> inc(1, 3), g(0, noise);
    std::vector<long> slope(static_cast<std::size_t>(t.width()));
    for (std::size_t i = 1; i < slope.size(); ++i) slope[i] = slope[i - 1] + inc(rng);
    const long centre = slope[slope.size() / 2];
    std::vector<long> phi(slope.size(), 0);
    for (std::size_t i = 1; i < phi.size(); ++i) phi[i] = phi[i - 1] + slope[i - 1] - centre;
    std::vector<long> g1(n), g2(n);
    for (int a = 0; a < n; ++a) {
        g1[a] = g(rng);
        g2[a] = g(rng);
    }
    for (long a = 0; a < n; ++a)
        for (long d = t.dmin; d <= t.dmax; ++d)
            at(t, a, d) = static_cast<double>(phi[d - t.dmin] + g1[a] + g2[mod(a + d, n)]);
    t.lip = 1.0;
    t.theta = 1.0;
    t.curvature = 2.0;
    return t;
}

aubry::DisplacementRange product_band(const TabulatedH& a, const TabulatedH& b) {
    const BandPolicy pol{a.policy.core_lo + b.policy.core_lo, a.policy.core_hi + b.policy.core_hi,
                         std::max(a.policy.margin, b.policy.margin)};
    const auto clip = pol.nodes(a.n);
    return {std::max(a.dmin + b.dmin, clip.lo), std::min(a.dmax + b.dmax, clip.hi)};
}

TabulatedH exhaustive_conjoin(const TabulatedH& a, const TabulatedH& b) {
    const BandPolicy pol{a.policy.core_lo + b.policy.core_lo, a.policy.core_hi + b.policy.core_hi,
                         std::max(a.policy.margin, b.policy.margin)};
    TabulatedH c = blank(a.n, product_band(a, b), pol);
    const long n = a.n;
    for (long x = 0; x < n; ++x)
        for (long d = c.dmin; d <= c.dmax; ++d)
            for (long y = x + a.dmin; y <= x + a.dmax; ++y) {
                const double v = a.lift_value(x, y) + b.lift_value(y, x + d);
                at(c, x, d) = std::min(at(c, x, d), v);
            }
    return c;
}

TabulatedH exhaustive_power(const TabulatedH& t, long q) {
    if (q < 1 || q > 6) throw std::invalid_argument("path enumeration supports 1 <= q <= 6");
    // band of every size reachable in the split tree
    std::function<aubry::DisplacementRange(long)> band = [&](long s) -> aubry::DisplacementRange {
        if (s == 1) return {t.dmin, t.dmax};
        const auto l = band(s / 2), r = band(s - s / 2);
        const auto clip = scaled(t.policy, s).nodes(t.n);
        return {std::max(l.lo + r.lo, clip.lo), std::min(l.hi + r.hi, clip.hi)};
    };
    // split tree intervals [i, j) with j - i >= 2, grouped by right end
    std::vector<std::vector<std::pair<long, long>>> ending(q + 1);
    std::function<void(long, long)> collect = [&](long i, long j) {
        if (j - i < 2) return;
        ending[j].push_back({i, j});
        const long s = j - i;
        collect(i, i + s / 2);
        collect(i + s / 2, j);
    };
    collect(0, q);

    TabulatedH out = blank(t.n, band(q), scaled(t.policy, q));
    std::vector<long> node(q + 1);
    std::function<void(long, long, double)> dfs = [&](long x0, long k, double acc) {
        if (k == q) {
            at(out, x0, node[q] - x0) = std::min(at(out, x0, node[q] - x0), acc);
            return;
        }
        for (long e = t.dmin; e <= t.dmax; ++e) {
            node[k + 1] = node[k] + e;
            bool ok = true;
            for (auto [i, j] : ending[k + 1]) {
                const auto b = band(j - i);
                const long s = node[j] - node[i];
                if (s < b.lo || s > b.hi) ok = false;
            }
            if (ok) dfs(x0, k + 1, acc + t.lift_value(node[k], node[k + 1]));
        }
    };
    for (long x0 = 0; x0 < t.n; ++x0) {
        node[0] = x0;
        dfs(x0, 0, 0.0);
    }
    return out;
}

Path exhaustive_path(const TabulatedH& t, long steps, long x0, long xq, long spread) {
    Path best{kInf, {}};
    std::vector<long> node(steps + 1);
    node[0] = x0;
    node[steps] = xq;
    std::function<void(long, double)> dfs = [&](long i, double acc) {
        if (i == steps - 1) {
            const double v = acc + t.lift_value(node[i], xq);
            if (v < best.value) best = {v, node};
            return;
        }
        const long line = x0 + (xq - x0) * (i + 1) / steps;
        for (long y = line - spread; y <= line + spread; ++y) {
            node[i + 1] = y;
            dfs(i + 1, acc + t.lift_value(node[i], y));
        }
    };
    if (steps == 1) return {t.lift_value(x0, xq), {x0, xq}};
    dfs(0, 0.0);
    return best;
}

Path periodic_min_dp(const TabulatedH& t, long p, long q, long j) {
    const long n = t.n;
    const long end = j + p * n;
    auto lo = [&](long i) { return j + (p * n * i) / q - n; };
    // f[i][y - lo(i)] best action of x_0..x_i with x_i = y
    std::vector<std::vector<double>> f(q);
    std::vector<std::vector<long>> arg(q);
    f[0] = {0.0};
    arg[0] = {j};
    std::vector<long> base(q);
    base[0] = j;
    for (long i = 1; i < q; ++i) {
        base[i] = lo(i);
        f[i].assign(2 * n + 1, kInf);
        arg[i].assign(2 * n + 1, 0);
        for (long y = base[i]; y <= base[i] + 2 * n; ++y) {
            for (std::size_t s = 0; s < f[i - 1].size(); ++s) {
                const long prev = base[i - 1] + static_cast<long>(s);
                const double v = f[i - 1][s] + t.lift_value(prev, y);
                if (v < f[i][y - base[i]]) {
                    f[i][y - base[i]] = v;
                    arg[i][y - base[i]] = prev;
                }
            }
        }
    }
    Path best{kInf, std::vector<long>(q + 1)};
    long last = j;
    for (std::size_t s = 0; s < f[q - 1].size(); ++s) {
        const long prev = base[q - 1] + static_cast<long>(s);
        const double v = f[q - 1][s] + t.lift_value(prev, end);
        if (v < best.value) {
            best.value = v;
            last = prev;
        }
    }
    best.nodes[q] = end;
    best.nodes[0] = j;
    if (q > 1) {
        best.nodes[q - 1] = last;
        for (long i = q - 1; i > 1; --i) best.nodes[i - 1] = arg[i][best.nodes[i] - base[i]];
    }
    return best;
}

std::vector<double> constrained_barrier(const TabulatedH& t, long p, long q) {
    const long n = t.n;
    std::vector<Path> orbit(n);
    double lowest = kInf;
    for (long a = 0; a < n; ++a) {
        orbit[a] = periodic_min_dp(t, p, q, a);
        lowest = std::min(lowest, orbit[a].value);
    }
    const double tie = 1e-11 * std::max(1.0, std::abs(lowest));
    std::vector<long> aubry;
    for (long a = 0; a < n; ++a)
        if (orbit[a].value - lowest <= tie) aubry.push_back(a);

    auto lifted = [&](long j) {
        const long a = mod(j, n), shift = j - a;
        std::vector<long> x = orbit[a].nodes;
        for (long& v : x) v += shift;
        return x;
    };

    std::vector<double> out(n, 0.0);
    for (long a = 0; a < n; ++a) {
        if (std::binary_search(aubry.begin(), aubry.end(), a)) continue;
        auto up = std::upper_bound(aubry.begin(), aubry.end(), a);
        const long jp = up == aubry.end() ? aubry.front() + n : *up;
        const long jm = up == aubry.begin() ? aubry.back() - n : *(up - 1);
        const std::vector<long> xm = lifted(jm), xp = lifted(jp);
        double base = 0.0;
        for (long i = 0; i < q; ++i) base += t.lift_value(xm[i], xm[i + 1]);

        std::vector<long> y(q + 1);
        y[0] = a;
        y[q] = a + p * n;
        double best = kInf;
        std::function<void(long, double)> dfs = [&](long i, double acc) {
            if (i == q) {
                best = std::min(best, acc + t.lift_value(y[q - 1], y[q]));
                return;
            }
            for (long v = xm[i]; v <= xp[i]; ++v) {
                y[i] = v;
                dfs(i + 1, acc + t.lift_value(y[i - 1], v));
            }
        };
        if (q == 1) best = t.lift_value(y[0], y[1]);
        else dfs(1, 0.0);
        out[a] = best - base;
    }
    return out;
}

double greene_residue(double k, long p, long q, double x0) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const long m = q - 1;
    Eigen::VectorXd x(m);
    for (long i = 1; i < q; ++i) x[i - 1] = x0 + static_cast<double>(i * p) / q;
    auto node = [&](const Eigen::VectorXd& v, long i) {
        if (i == 0) return x0;
        if (i == q) return x0 + p;
        return v[i - 1];
    };
    auto residual = [&](const Eigen::VectorXd& v, double ks) {
        Eigen::VectorXd f(m);
        for (long i = 1; i < q; ++i) {
            const double xi = node(v, i);
            f[i - 1] = node(v, i + 1) - 2.0 * xi + node(v, i - 1) - ks / two_pi * std::sin(two_pi * xi);
        }
        return f;
    };
    // damped Newton from v at parameter ks; false if it stalls
    auto solve = [&](Eigen::VectorXd& v, double ks) {
        Eigen::VectorXd f = residual(v, ks);
        for (int it = 0; it < 50; ++it) {
            const double norm = f.lpNorm<Eigen::Infinity>();
            if (norm < 1e-11) return true;
            Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
            for (long i = 1; i < q; ++i) {
                jac(i - 1, i - 1) = -2.0 - ks * std::cos(two_pi * node(v, i));
                if (i > 1) jac(i - 1, i - 2) = 1.0;
                if (i < q - 1) jac(i - 1, i) = 1.0;
            }
            const Eigen::VectorXd dx = jac.partialPivLu().solve(-f);
            if (!dx.allFinite()) return false;
            double t = 1.0;
            Eigen::VectorXd trial;
            Eigen::VectorXd ft;
            for (;; t *= 0.5) {
                if (t < 1e-6) return false;
                trial = v + t * dx;
                ft = residual(trial, ks);
                if (ft.lpNorm<Eigen::Infinity>() < norm) break;
            }
            v = trial;
            f = ft;
        }
        return f.lpNorm<Eigen::Infinity>() < 1e-11;
    };
    if (m > 0) {
        double kd = 0.0;
        double step = 0.02;
        while (kd < k) {
            const double target = std::min(k, kd + step);
            Eigen::VectorXd trial = x;
            if (solve(trial, target)) {
                x = trial;
                kd = target;
                step = std::min(0.02, 2.0 * step);
            } else {
                step *= 0.5;
                if (step < 1e-7) return std::numeric_limits<double>::quiet_NaN();
            }
        }
    }
    // trace of the one-period tangent map
    Eigen::Matrix2d mono = Eigen::Matrix2d::Identity();
    for (long i = 0; i < q; ++i) {
        const double c = k * std::cos(two_pi * node(x, i));
        Eigen::Matrix2d j;
        j << 1.0 + c, 1.0, c, 1.0;
        mono = j * mono;
    }
    return (2.0 - mono.trace()) / 4.0;
}

double greene_max_residue(double k, long p, long q) {
    return std::max(std::abs(greene_residue(k, p, q, 0.0)), std::abs(greene_residue(k, p, q, 0.5)));
}

double greene_critical_k(long q_fib, double lo, double hi, int iterations) {
    long a = 1, b = 1;
    while (b < q_fib) {
        const long c = a + b;
        a = b;
        b = c;
    }
    if (b != q_fib) throw std::invalid_argument("not a Fibonacci number");
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (greene_max_residue(mid, a, b) > 0.25) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
