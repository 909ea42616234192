#include "aubry/minplus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "aubry/errors.hpp"
#include "aubry/parallel.hpp"

namespace aubry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long mod(long a, long n) { return ((a % n) + n) % n; }

// Children search kSlack nodes past the parent's argmin, which absorbs
// round-off near-ties in weakly Monge products.
constexpr long kSlack = 2;

// Leftmost row minima of a staircase-banded Monge array: output o in
// [olo, ohi] reads inputs [lo(o), hi(o)], both bounds nondecreasing.
template <class Lo, class Hi, class Cost>
void monotone_minima(long olo, long ohi, const Lo& lo, const Hi& hi, const Cost& cost, double* val,
                     long* arg, long base_lo, long base_hi) {
    if (olo > ohi) return;
    const long om = olo + (ohi - olo) / 2;
    const long a = std::max(base_lo, lo(om));
    const long b = std::min(base_hi, hi(om));
    double best = kInf;
    long best_i = std::clamp(lo(om), base_lo, base_hi);
    for (long i = a; i <= b; ++i) {
        const double c = cost(om, i);
        if (c < best) {
            best = c;
            best_i = i;
        }
    }
    val[om - olo] = best;
    arg[om - olo] = best_i;
    monotone_minima(olo, om - 1, lo, hi, cost, val, arg, base_lo, std::min(base_hi, best_i + kSlack));
    monotone_minima(om + 1, ohi, lo, hi, cost, val + (om + 1 - olo), arg + (om + 1 - olo),
                    std::max(base_lo, best_i - kSlack), base_hi);
}

template <class Lo, class Hi, class Cost>
void naive_minima(long olo, long ohi, const Lo& lo, const Hi& hi, const Cost& cost, double* val,
                  long* arg) {
    for (long o = olo; o <= ohi; ++o) {
        double best = kInf;
        long best_i = lo(o);
        for (long i = lo(o); i <= hi(o); ++i) {
            const double c = cost(o, i);
            if (c < best) {
                best = c;
                best_i = i;
            }
        }
        val[o - olo] = best;
        arg[o - olo] = best_i;
    }
}

double merge_nan_max(double a, double b) {
    if (std::isnan(a)) return b;
    if (std::isnan(b)) return a;
    return std::max(a, b);
}

BandPolicy combine(const BandPolicy& a, const BandPolicy& b) {
    return BandPolicy{a.core_lo + b.core_lo, a.core_hi + b.core_hi, std::max(a.margin, b.margin)};
}

TabulatedH product_shell(const TabulatedH& a, const TabulatedH& b) {
    if (a.n != b.n) throw IncompatibleGrids("tables on grids " + std::to_string(a.n) + " and " +
                                            std::to_string(b.n));
    TabulatedH c;
    c.n = a.n;
    c.policy = combine(a.policy, b.policy);
    const DisplacementRange clip = c.policy.nodes(c.n);
    c.dmin = std::max(a.dmin + b.dmin, clip.lo);
    c.dmax = std::min(a.dmax + b.dmax, clip.hi);
    if (c.dmin > c.dmax) throw BandExceeded("conjunction band is empty after clipping");
    c.steps = a.steps + b.steps;
    c.lip = std::max(a.lip, b.lip);
    c.theta = merge_nan_max(a.theta, b.theta);
    c.curvature = merge_nan_max(a.curvature, b.curvature);
    c.value_error = std::max(a.value_error, b.value_error);
    return c;
}

[[noreturn]] void edge_error(long row, long d, long e) {
    throw BandExceeded("argmin at band edge (row " + std::to_string(row) + ", displacement " +
                       std::to_string(d) + ", intermediate " + std::to_string(e) + ")");
}

struct RowView {
    const TabulatedH& a;
    const TabulatedH& b;
    long row;
    std::vector<const double*> brows;  // B row at node row + e, indexed by e - a.dmin

    RowView(const TabulatedH& a_, const TabulatedH& b_, long row_) : a(a_), b(b_), row(row_) {
        brows.resize(static_cast<std::size_t>(a.width()));
        for (long e = a.dmin; e <= a.dmax; ++e)
            brows[e - a.dmin] = b.row(static_cast<int>(mod(row + e, b.n)));
    }
    long lo(long d) const { return std::max(a.dmin, d - b.dmax); }
    long hi(long d) const { return std::min(a.dmax, d - b.dmin); }
    double cost(long d, long e) const {
        return a.row(static_cast<int>(row))[e - a.dmin] + brows[e - a.dmin][d - e - b.dmin];
    }
};

// Sizes needed at each level of the balanced split tree below the roots.
std::vector<std::vector<long>> split_levels(std::vector<long> roots) {
    std::vector<std::vector<long>> levels{roots};
    while (true) {
        std::set<long> next;
        bool split = false;
        for (long s : levels.back()) {
            if (s > 1) {
                next.insert(s / 2);
                next.insert(s - s / 2);
                split = true;
            } else {
                next.insert(1);
            }
        }
        if (!split) break;
        levels.emplace_back(next.begin(), next.end());
    }
    return levels;
}

using Shared = std::shared_ptr<const TabulatedH>;

// Builds t^{*s} for every s in roots, level by level.
std::map<long, Shared> build_powers(const TabulatedH& t, const std::vector<long>& roots,
                                    Kernel kernel) {
    const auto levels = split_levels(roots);
    Shared base(&t, [](const TabulatedH*) {});
    std::map<long, Shared> cur{{1, base}};
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        std::map<long, Shared> next;
        for (long s : *it) {
            if (s == 1) {
                next[1] = base;
            } else if (auto found = cur.find(s); found != cur.end()) {
                next[s] = found->second;
            } else {
                next[s] = std::make_shared<const TabulatedH>(
                    conjoin(*cur.at(s / 2), *cur.at(s - s / 2), kernel));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

struct Reach {
    long lo;
    long hi;
};

Reach chain_reach(const std::vector<const TabulatedH*>& chain, std::size_t i, std::size_t j) {
    long lo = 0, hi = 0;
    BandPolicy pol{0.0, 0.0, 0};
    for (std::size_t t = i; t < j; ++t) {
        lo += chain[t]->dmin;
        hi += chain[t]->dmax;
        pol = combine(pol, chain[t]->policy);
    }
    if (j - i > 1) {
        const DisplacementRange clip = pol.nodes(chain[i]->n);
        lo = std::max(lo, clip.lo);
        hi = std::min(hi, clip.hi);
    }
    return {lo, hi};
}

struct Vec {
    long lo = 0;
    std::vector<double> v;
    long hi() const { return lo + static_cast<long>(v.size()) - 1; }
};

void trim(Vec& f) {
    std::size_t b = 0, e = f.v.size();
    while (b < e && !std::isfinite(f.v[b])) ++b;
    while (e > b && !std::isfinite(f.v[e - 1])) --e;
    if (b == e) throw BandExceeded("endpoints are out of reach of the chain");
    f.v = std::vector<double>(f.v.begin() + b, f.v.begin() + e);
    f.lo += static_cast<long>(b);
}

Vec forward_vector(const std::vector<const TabulatedH*>& chain, std::size_t i, std::size_t j, long u) {
    Vec f{u, {0.0}};
    for (std::size_t t = i; t < j; ++t) {
        const TabulatedH& tab = *chain[t];
        const Reach r = chain_reach(chain, i, t + 1);
        const long olo = std::max(u + r.lo, f.lo + tab.dmin);
        const long ohi = std::min(u + r.hi, f.hi() + tab.dmax);
        if (olo > ohi) throw BandExceeded("endpoints are out of reach of the chain");
        Vec g{olo, std::vector<double>(static_cast<std::size_t>(ohi - olo + 1))};
        std::vector<long> arg(g.v.size());
        auto lo = [&](long yp) { return std::max(f.lo, yp - tab.dmax); };
        auto hi = [&](long yp) { return std::min(f.hi(), yp - tab.dmin); };
        auto cost = [&](long yp, long y) { return f.v[y - f.lo] + tab.lift_value(y, yp); };
        monotone_minima(olo, ohi, lo, hi, cost, g.v.data(), arg.data(), f.lo, f.hi());
        trim(g);
        f = std::move(g);
    }
    return f;
}

Vec backward_vector(const std::vector<const TabulatedH*>& chain, std::size_t i, std::size_t j, long v) {
    Vec b{v, {0.0}};
    for (std::size_t t = j; t-- > i;) {
        const TabulatedH& tab = *chain[t];
        const Reach r = chain_reach(chain, t, j);
        const long olo = std::max(v - r.hi, b.lo - tab.dmax);
        const long ohi = std::min(v - r.lo, b.hi() - tab.dmin);
        if (olo > ohi) throw BandExceeded("endpoints are out of reach of the chain");
        Vec g{olo, std::vector<double>(static_cast<std::size_t>(ohi - olo + 1))};
        std::vector<long> arg(g.v.size());
        auto lo = [&](long y) { return std::max(b.lo, y + tab.dmin); };
        auto hi = [&](long y) { return std::min(b.hi(), y + tab.dmax); };
        auto cost = [&](long y, long yp) { return tab.lift_value(y, yp) + b.v[yp - b.lo]; };
        monotone_minima(olo, ohi, lo, hi, cost, g.v.data(), arg.data(), b.lo, b.hi());
        trim(g);
        b = std::move(g);
    }
    return b;
}

void backtrack(const std::vector<const TabulatedH*>& chain, std::size_t i, std::size_t j, long u,
               long v, std::vector<long>& nodes) {
    if (j - i <= 1) return;
    const std::size_t mid = i + (j - i) / 2;
    const Vec f = forward_vector(chain, i, mid, u);
    const Vec b = backward_vector(chain, mid, j, v);
    const long lo = std::max(f.lo, b.lo), hi = std::min(f.hi(), b.hi());
    if (lo > hi) throw BandExceeded("endpoints are out of reach of the chain");
    double best = kInf;
    long best_y = lo;
    for (long y = lo; y <= hi; ++y) {
        const double c = f.v[y - f.lo] + b.v[y - b.lo];
        if (c < best) {
            best = c;
            best_y = y;
        }
    }
    if (hi > lo && (best_y == lo || best_y == hi))
        throw BandExceeded("minimal segment touches the band edge at step " + std::to_string(mid));
    nodes[mid] = best_y;
    backtrack(chain, i, mid, u, best_y, nodes);
    backtrack(chain, mid, j, best_y, v, nodes);
}

}  // namespace

TabulatedH tabulate(const GeneratingFunction& h, int n, DisplacementRange band) {
    if (n <= 0) throw std::invalid_argument("grid size must be positive");
    if (band.lo > band.hi) throw std::invalid_argument("empty displacement band");
    const double reach = h.band_width * n;
    if (std::abs(static_cast<double>(band.lo)) > reach || std::abs(static_cast<double>(band.hi)) > reach)
        throw BandExceeded("band [" + std::to_string(band.lo) + ", " + std::to_string(band.hi) +
                           "] exceeds the validity window of h");
    TabulatedH t;
    t.n = n;
    t.dmin = band.lo;
    t.dmax = band.hi;
    t.values.resize(static_cast<std::size_t>(n) * t.width());
    parallel_for(n, [&](std::size_t a) {
        const double x = static_cast<double>(a) / n;
        double* out = t.values.data() + a * t.width();
        for (long d = band.lo; d <= band.hi; ++d)
            out[d - band.lo] = h(x, static_cast<double>(static_cast<long>(a) + d) / n);
    });
    t.steps = 1;
    if (h.partial_bounds) {
        const auto [b1, b2] = h.partial_bounds(static_cast<double>(band.lo) / n,
                                               static_cast<double>(band.hi) / n);
        t.lip = b1 + b2;
    }
    t.theta = h.theta;
    t.curvature = h.theta + h.rho_max;
    // Centered policy: the band itself, so products are clipped back to it.
    const double center = 0.5 * static_cast<double>(band.lo + band.hi) / n;
    const long half = (band.hi - band.lo) / 2 / n;
    t.policy = BandPolicy{center, center, static_cast<int>(half)};
    return t;
}

TabulatedH tabulate(const GeneratingFunction& h, int n, const BandPolicy& policy) {
    TabulatedH t = tabulate(h, n, policy.nodes(n));
    t.policy = policy;
    return t;
}

TabulatedH conjoin(const TabulatedH& a, const TabulatedH& b, Kernel kernel) {
    TabulatedH c = product_shell(a, b);
    const long w = c.width();
    c.values.resize(static_cast<std::size_t>(c.n) * w);
    parallel_for(c.n, [&](std::size_t r) {
        const RowView view(a, b, static_cast<long>(r));
        std::vector<long> arg(static_cast<std::size_t>(w));
        double* out = c.values.data() + r * w;
        auto lo = [&](long d) { return view.lo(d); };
        auto hi = [&](long d) { return view.hi(d); };
        auto cost = [&](long d, long e) { return view.cost(d, e); };
        if (kernel == Kernel::monotone)
            monotone_minima(c.dmin, c.dmax, lo, hi, cost, out, arg.data(), a.dmin, a.dmax);
        else
            naive_minima(c.dmin, c.dmax, lo, hi, cost, out, arg.data());
        for (long d = c.dmin; d <= c.dmax; ++d) {
            const long e = arg[d - c.dmin];
            if (e == view.lo(d) || e == view.hi(d)) edge_error(static_cast<long>(r), d, e);
        }
    });
    return c;
}

std::vector<double> conjoin_column(const TabulatedH& a, const TabulatedH& b, long d) {
    const TabulatedH shell = product_shell(a, b);
    if (!shell.in_band(d)) throw BandExceeded("column " + std::to_string(d) + " outside the product band");
    std::vector<double> col(static_cast<std::size_t>(a.n));
    parallel_for(a.n, [&](std::size_t r) {
        const RowView view(a, b, static_cast<long>(r));
        double best = kInf;
        long best_e = view.lo(d);
        for (long e = view.lo(d); e <= view.hi(d); ++e) {
            const double c = view.cost(d, e);
            if (c < best) {
                best = c;
                best_e = e;
            }
        }
        if (best_e == view.lo(d) || best_e == view.hi(d)) edge_error(static_cast<long>(r), d, best_e);
        col[r] = best;
    });
    return col;
}

TabulatedH shift(const TabulatedH& t, long p) {
    TabulatedH s = t;
    s.dmin -= p * t.n;
    s.dmax -= p * t.n;
    s.policy.core_lo -= static_cast<double>(p);
    s.policy.core_hi -= static_cast<double>(p);
    return s;
}

TabulatedH power_conjunction(const TabulatedH& t, long q, long p, Kernel kernel) {
    if (q < 1) throw std::invalid_argument("power must be >= 1");
    if (q == 1) return p == 0 ? t : shift(t, p);
    auto powers = build_powers(t, {q}, kernel);
    const TabulatedH& h = *powers.at(q);
    return p == 0 ? h : shift(h, p);
}

std::vector<double> power_column(const TabulatedH& t, long q, long d) {
    if (q < 1) throw std::invalid_argument("power must be >= 1");
    if (q == 1) {
        if (!t.in_band(d)) throw BandExceeded("column " + std::to_string(d) + " outside the band");
        std::vector<double> col(static_cast<std::size_t>(t.n));
        for (int r = 0; r < t.n; ++r) col[r] = t(r, d);
        return col;
    }
    auto powers = build_powers(t, {q / 2, q - q / 2}, Kernel::monotone);
    return conjoin_column(*powers.at(q / 2), *powers.at(q - q / 2), d);
}

Configuration backtrack_minimal_segment(const std::vector<const TabulatedH*>& chain, long x0, long xq) {
    if (chain.empty()) throw std::invalid_argument("empty chain");
    const int n = chain.front()->n;
    for (const TabulatedH* t : chain)
        if (t->n != n) throw IncompatibleGrids("chain mixes grid sizes");
    const Reach r = chain_reach(chain, 0, chain.size());
    if (xq - x0 < r.lo || xq - x0 > r.hi) throw BandExceeded("endpoints are out of reach of the chain");
    std::vector<long> nodes(chain.size() + 1);
    nodes.front() = x0;
    nodes.back() = xq;
    backtrack(chain, 0, chain.size(), x0, xq, nodes);
    Configuration c;
    c.start = 0;
    c.n = n;
    c.nodes = nodes;
    c.x.reserve(nodes.size());
    for (long j : nodes) c.x.push_back(static_cast<double>(j) / n);
    return c;
}

Configuration backtrack_minimal_segment(const std::vector<TabulatedH>& chain, long x0, long xq) {
    std::vector<const TabulatedH*> ptrs;
    ptrs.reserve(chain.size());
    for (const auto& t : chain) ptrs.push_back(&t);
    return backtrack_minimal_segment(ptrs, x0, xq);
}

double chain_action(const std::vector<const TabulatedH*>& chain, const std::vector<long>& nodes) {
    if (nodes.size() != chain.size() + 1) throw std::invalid_argument("path length does not match chain");
    double s = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) s += chain[i]->lift_value(nodes[i], nodes[i + 1]);
    return s;
}

double grid_error_bound(const TabulatedH& t, long steps) {
    if (steps == 0) return 0.0;
    return static_cast<double>(steps) * t.lip * 2.0 / t.n;
}

double smooth_grid_error_bound(const TabulatedH& t, long steps) {
    if (steps == 0) return 0.0;
    if (std::isnan(t.curvature)) return kInf;
    const double n2 = static_cast<double>(t.n) * t.n;
    return static_cast<double>(steps) * (t.curvature / (4.0 * n2) + t.value_error);
}

}  // namespace aubry
