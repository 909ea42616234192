#include "aubry/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aubry/errors.hpp"
#include "aubry/genfun.hpp"

namespace aubry {

namespace {

void fill_from_column(BarrierProfile& prof, const std::vector<double>& col, int n) {
    prof.n = n;
    prof.xi.resize(col.size());
    prof.values.resize(col.size());
    const auto it = std::min_element(col.begin(), col.end());
    prof.argmin = static_cast<long>(it - col.begin());
    const double lowest = *it;
    for (std::size_t a = 0; a < col.size(); ++a) {
        prof.xi[a] = static_cast<double>(a) / n;
        prof.values[a] = col[a] - lowest;
    }
}

void total(BarrierProfile& prof) { prof.err_total = prof.err_omega + prof.err_m + prof.err_grid; }

double table_theta(const TabulatedH& t) {
    if (std::isnan(t.theta)) throw std::invalid_argument("table carries no twist constant");
    return t.theta;
}

}  // namespace

double BarrierProfile::sup() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

BarrierProfile barrier_rational(const TabulatedH& t, long p, long q) {
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    BarrierProfile prof;
    prof.symbol = rational_symbol(p, q);
    prof.p = prof.symbol.p;
    prof.q = prof.symbol.q;
    fill_from_column(prof, power_column(t, prof.q, prof.p * t.n), t.n);
    prof.err_grid = smooth_grid_error_bound(t, prof.q);
    total(prof);
    return prof;
}

BarrierProfile barrier_one_sided(const TabulatedH& t, long p, long q, Side side, long m) {
    if (m < 2) throw std::invalid_argument("m must be >= 2");
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    const double theta = table_theta(t);
    BarrierProfile prof;
    prof.symbol = rational_symbol(p, q, side == Side::plus ? SymbolKind::plus : SymbolKind::minus);
    prof.p = prof.symbol.p;
    prof.q = prof.symbol.q;
    prof.m = m;
    const TabulatedH h = power_conjunction(t, prof.q, prof.p);
    const long d = side == Side::plus ? t.n : -static_cast<long>(t.n);
    fill_from_column(prof, power_column(h, m, d), t.n);
    prof.err_m = 16.0 * theta / static_cast<double>(m);
    prof.err_grid = smooth_grid_error_bound(t, prof.q * m);
    total(prof);
    return prof;
}

BarrierProfile barrier_irrational(const TabulatedH& t, double omega, long n, long m) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    const auto [p, q] = dirichlet_approx(omega, n);
    const double gap = std::fma(static_cast<double>(q), omega, -static_cast<double>(p));
    if (gap == 0.0) throw std::invalid_argument("rotation number is rational at this depth");
    BarrierProfile prof = barrier_one_sided(t, p, q, gap > 0.0 ? Side::plus : Side::minus, m);
    prof.symbol = irrational_symbol(omega);
    prof.err_omega = 4800.0 * table_theta(t) * std::abs(gap);
    total(prof);
    return prof;
}

std::string verdict_name(Verdict v) {
    return v == Verdict::certain_absent ? "CertainAbsent" : "Inconclusive";
}

CircleVerdict circle_verdict(const BarrierProfile& profile) {
    CircleVerdict v;
    if (profile.values.empty()) return v;
    const auto it = std::max_element(profile.values.begin(), profile.values.end());
    v.sup = *it;
    v.witness = static_cast<long>(it - profile.values.begin());
    v.verdict = v.sup > profile.err_total ? Verdict::certain_absent : Verdict::inconclusive;
    return v;
}

Window rational_window(long p, long q) {
    const double w = static_cast<double>(p) / static_cast<double>(q);
    return {w, w};
}

Window one_sided_window(long p, long q, Side side, long m) {
    const double qm = static_cast<double>(q) * static_cast<double>(m);
    const double mp = static_cast<double>(m) * static_cast<double>(p);
    const double w = static_cast<double>(p) / static_cast<double>(q);
    return side == Side::plus ? Window{w, (mp + 1.0) / qm} : Window{(mp - 1.0) / qm, w};
}

int default_margin(Window w) {
    return 12 + static_cast<int>(std::ceil(std::max(std::abs(w.lo), std::abs(w.hi))));
}

TabulatedH window_table(const FamilySpec& family, int n, Window w, int margin) {
    if (margin < 0) margin = default_margin(w);
    const double reach = std::ceil(std::max(std::abs(w.lo), std::abs(w.hi)));
    const GeneratingFunction h = make_generating(family, margin + reach + 1.0);
    return tabulate(h, n, BandPolicy{w.lo, w.hi, margin});
}

Schedule schedule_for(const FamilySpec& family, const RotationSymbol& symbol, const BarrierRequest& req) {
    if (!(req.budget > 0.0)) throw std::invalid_argument("budget must be positive");
    const GeneratingFunction h = make_generating(family);
    const double theta = h.theta;
    const double curvature = h.theta + h.rho_max;
    const double eps = req.budget;
    Schedule s;
    switch (symbol.kind) {
        case SymbolKind::rational:
            s.p = symbol.p;
            s.q = symbol.q;
            break;
        case SymbolKind::plus:
        case SymbolKind::minus:
            s.p = symbol.p;
            s.q = symbol.q;
            s.side = symbol.kind == SymbolKind::plus ? Side::plus : Side::minus;
            break;
        case SymbolKind::irrational: {
            s.n_dirichlet = req.n_dirichlet ? *req.n_dirichlet
                                            : static_cast<long>(std::ceil(14400.0 * theta / eps)) - 1;
            s.n_dirichlet = std::max(2L, s.n_dirichlet);
            const auto [p, q] = dirichlet_approx(symbol.omega, s.n_dirichlet);
            s.p = p;
            s.q = q;
            s.side = std::fma(static_cast<double>(q), symbol.omega, -static_cast<double>(p)) > 0.0
                         ? Side::plus
                         : Side::minus;
            break;
        }
    }
    long steps = s.q;
    if (s.side) {
        s.m = req.m ? *req.m : static_cast<long>(std::ceil(48.0 * theta / eps));
        s.m = std::max(2L, s.m);
        if (s.q > req.caps.max_steps / s.m)
            throw ToleranceNotAchievable("q*m = " + std::to_string(s.q) + "*" + std::to_string(s.m) +
                                         " exceeds the step cap " + std::to_string(req.caps.max_steps));
        steps = s.q * s.m;
    }
    if (req.n_grid) {
        s.n_grid = *req.n_grid;
    } else {
        s.n_grid = 64;
        while (curvature * static_cast<double>(steps) / (4.0 * s.n_grid * s.n_grid) > eps / 3.0) {
            if (s.n_grid > req.caps.max_grid) break;
            s.n_grid *= 2;
        }
    }
    if (s.n_grid > req.caps.max_grid)
        throw ToleranceNotAchievable("grid " + std::to_string(s.n_grid) + " exceeds the cap " +
                                     std::to_string(req.caps.max_grid));
    return s;
}

BarrierProfile compute_barrier(const FamilySpec& family, const RotationSymbol& symbol,
                               const BarrierRequest& req) {
    const Schedule s = schedule_for(family, symbol, req);
    BarrierProfile prof;
    if (!s.side) {
        const TabulatedH t = window_table(family, s.n_grid, rational_window(s.p, s.q), req.margin.value_or(-1));
        prof = barrier_rational(t, s.p, s.q);
    } else {
        const TabulatedH t = window_table(family, s.n_grid, one_sided_window(s.p, s.q, *s.side, s.m),
                                         req.margin.value_or(-1));
        if (symbol.kind == SymbolKind::irrational)
            prof = barrier_irrational(t, symbol.omega, s.n_dirichlet, s.m);
        else
            prof = barrier_one_sided(t, s.p, s.q, *s.side, s.m);
    }
    prof.symbol = symbol;
    return prof;
}

}  // namespace aubry
