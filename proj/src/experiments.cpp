#include "aubry/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aubry/errors.hpp"
#include "aubry/genfun.hpp"
#include "aubry/minplus.hpp"
#include "aubry/orbits.hpp"

namespace aubry {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

double table_diff(const TabulatedH& a, const TabulatedH& b, long dlo, long dhi) {
    double s = 0.0;
    const long lo = std::max({a.dmin, b.dmin, dlo}), hi = std::min({a.dmax, b.dmax, dhi});
    for (int r = 0; r < a.n; ++r)
        for (long d = lo; d <= hi; ++d) s = std::max(s, std::abs(a(r, d) - b(r, d)));
    return s;
}

std::vector<double> one_sided_values(const TabulatedH& h, long m, bool plus) {
    std::vector<double> col = power_column(h, m, plus ? h.n : -static_cast<long>(h.n));
    const double lowest = *std::min_element(col.begin(), col.end());
    for (double& v : col) v -= lowest;
    return col;
}

int grid_for_budget(double curvature, long steps, double budget, const ScheduleCaps& caps) {
    int n = 64;
    while (curvature * static_cast<double>(steps) / (4.0 * n * n) > budget / 3.0) {
        n *= 2;
        if (n > caps.max_grid)
            throw ToleranceNotAchievable("grid " + std::to_string(n) + " exceeds the cap " +
                                         std::to_string(caps.max_grid));
    }
    return n;
}

}  // namespace

double lemma1_constant(const TwistMapLift& f, const Annulus& ann) {
    double a = std::numeric_limits<double>::infinity();
    double slope_max = 0.0, L = 0.0, norm = 0.0;
    const int nx = 256, ny = static_cast<int>(std::ceil(2.0 * ann.K * 256));
    for (int j = 0; j <= ny; ++j) {
        const double y = -ann.K + 2.0 * ann.K * j / ny;
        for (int i = 0; i <= nx; ++i) {
            const double x = static_cast<double>(i) / nx;
            const Point p = f(x, y);
            const Jacobian jac = f.jacobian(x, y);
            a = std::min(a, jac[0][1]);
            slope_max = std::max(slope_max, jac[0][1]);
            L = std::max(L, std::abs(jac[1][1]));
            norm = std::max({norm, std::abs(p.x), std::abs(p.y)});
            for (const auto& row : jac)
                for (double e : row) norm = std::max(norm, std::abs(e));
        }
    }
    if (!(a > 0.0)) throw TwistViolation("twist bound a is not positive");
    const double b = std::min(a, 1.0 / slope_max);
    return 1.0 / a + 2.0 * norm * (1.0 + L / b);
}

std::vector<HolderRow> holder_experiment(const FamilySpec& base, double omega,
                                         const std::vector<double>& deltas, double budget,
                                         const ScheduleCaps& caps) {
    if (deltas.empty()) throw std::invalid_argument("no deltas given");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw std::invalid_argument("deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1])) throw std::invalid_argument("deltas must decrease");
    }
    if (!is_irrational(omega)) throw std::invalid_argument("omega must be irrational");

    const GeneratingFunction h_base = make_generating(base);
    const TwistMapLift f_base = make_lift(base);
    const double c1 = lemma1_constant(f_base, choose_annulus(f_base, omega, omega));
    const double analytic = 14449.0 * h_base.theta + 3.0 * c1;

    std::vector<HolderRow> rows;
    for (double delta : deltas) {
        HolderRow row;
        row.delta = delta;
        row.n = static_cast<long>(std::floor(std::cbrt(1.0 / delta) + 1e-9));
        if (row.n < 2) throw std::invalid_argument("delta too large for the n = m schedule");
        const long m = row.n;
        const auto [p, q] = dirichlet_approx(omega, row.n);
        row.p = p;
        row.q = q;
        const double gap = std::fma(static_cast<double>(q), omega, -static_cast<double>(p));
        const Side side = gap > 0.0 ? Side::plus : Side::minus;
        if (q > caps.max_steps / m) throw ToleranceNotAchievable("q*m exceeds the step cap");
        const FamilySpec pert = base.with_k(base.k + delta);
        const GeneratingFunction h_pert = make_generating(pert);
        const double curvature = std::max(h_base.theta, h_pert.theta) + 1.0;
        const int n_grid = grid_for_budget(curvature, q * m, budget, caps);
        const Window w = one_sided_window(p, q, side, m);
        const BarrierProfile pb = barrier_irrational(window_table(base, n_grid, w), omega, row.n, m);
        const BarrierProfile pp = barrier_irrational(window_table(pert, n_grid, w), omega, row.n, m);
        row.sup_dp = max_abs_diff(pb.values, pp.values);
        row.budget = pb.err_total + pp.err_total;
        row.analytic_c0 = analytic;
        rows.push_back(row);
    }
    const double c0 = rows.front().sup_dp / std::cbrt(rows.front().delta);
    for (auto& row : rows) {
        row.bound = c0 * std::cbrt(row.delta);
        row.pass = row.sup_dp <= row.bound + row.budget;
    }
    return rows;
}

bool SuiteReport::pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
}

SuiteReport bound_suite(const FamilySpec& family, double k_prime, const SuiteCases& cases) {
    if (cases.omegas.empty() || cases.qs.empty() || cases.ms.empty())
        throw std::invalid_argument("suite cases need q, m and omega lists");
    const int n = cases.n_grid;
    const FamilySpec fam_p = family.with_k(k_prime);
    const TwistMapLift f = make_lift(family), fp = make_lift(fam_p);
    const std::string pair = "k=" + fmt(family.k) + ";k'=" + fmt(k_prime);
    SuiteReport rep;
    auto add = [&](std::string ineq, std::string label, double left, double right, double budget,
                   bool strict = false) {
        SuiteRow r{std::move(ineq), pair + ";" + label, left, right, budget, false};
        r.pass = strict ? left < right + budget : left <= right + budget;
        rep.rows.push_back(std::move(r));
    };

    // Generating-function lemma on B_{K-1}.
    const Annulus ann = choose_annulus(f, 0.0, 1.0);
    {
        const C1Distance dist = c1_distance_report(f, fp, ann);
        const double c1 = lemma1_constant(f, ann);
        const long reach = static_cast<long>(ann.K - 1.0) * n;
        const TabulatedH t = tabulate(make_generating(family, ann.K), n, DisplacementRange{-reach, reach});
        const TabulatedH tp = tabulate(make_generating(fam_p, ann.K), n, DisplacementRange{-reach, reach});
        const double z = t(0, 0), zp = tp(0, 0);
        double normalized = 0.0;
        for (int r = 0; r < n; ++r)
            for (long d = -reach; d <= reach; ++d)
                normalized = std::max(normalized, std::abs((tp(r, d) - zp) - (t(r, d) - z)));
        add("lemma1", "K=" + fmt(ann.K), normalized, c1 * dist.sampled,
            c1 * dist.lipschitz_inflation + 1e-12);
        const double closed = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
        add("lemma1_closed_form", "K=" + fmt(ann.K), table_diff(t, tp, -reach, reach),
            closed * dist.sampled, closed * dist.lipschitz_inflation + 1e-12);
    }

    const double omega0 = cases.omegas.front();
    const long m_ref = 4 * *std::max_element(cases.ms.begin(), cases.ms.end());
    // Reference irrational barriers, one per omega.
    constexpr long kDirichletRef = 21, kMRef = 32;
    std::vector<BarrierProfile> p_omega;
    for (double omega : cases.omegas) {
        const auto [p, q] = dirichlet_approx(omega, kDirichletRef);
        const double gap = std::fma(static_cast<double>(q), omega, -static_cast<double>(p));
        const Side side = gap > 0.0 ? Side::plus : Side::minus;
        const TabulatedH tw = window_table(family, n, one_sided_window(p, q, side, kMRef));
        p_omega.push_back(barrier_irrational(tw, omega, kDirichletRef, kMRef));
    }

    for (long q : cases.qs) {
        const long p = std::lround(static_cast<double>(q) * omega0);
        const TabulatedH t = window_table(family, n, rational_window(p, q));
        const TabulatedH tp = window_table(fam_p, n, rational_window(p, q));
        const double theta = t.theta;
        const double dh = table_diff(t, tp, t.dmin, t.dmax);
        const std::string ql = "q=" + std::to_string(q);

        const TabulatedH h = power_conjunction(t, q, p);
        const TabulatedH hp = power_conjunction(tp, q, p);
        add("lemma5_1", ql, table_diff(h, hp, -5L * n, 5L * n), static_cast<double>(q) * dh,
            1e-12 * static_cast<double>(q));

        const std::vector<double> ref_plus = one_sided_values(h, m_ref, true);
        const std::vector<double> ref_minus = one_sided_values(h, m_ref, false);
        for (long m : cases.ms) {
            const std::string ml = ql + ";m=" + std::to_string(m);
            const std::vector<double> pm = one_sided_values(h, m, true);
            const std::vector<double> ppm = one_sided_values(hp, m, true);
            add("lemma5_2", ml, max_abs_diff(pm, ppm), 2.0 * static_cast<double>(m * q) * dh,
                1e-12 * static_cast<double>(m * q));
            const double grid = smooth_grid_error_bound(t, q * m) + smooth_grid_error_bound(t, q * m_ref);
            const double ref_err = 16.0 * theta / static_cast<double>(m_ref);
            add("lemma4", ml + ";side=+", max_abs_diff(pm, ref_plus), 16.0 * theta / static_cast<double>(m),
                ref_err + grid);
            const std::vector<double> mm = one_sided_values(h, m, false);
            add("lemma4", ml + ";side=-", max_abs_diff(mm, ref_minus), 16.0 * theta / static_cast<double>(m),
                ref_err + grid);
        }

        for (std::size_t w = 0; w < cases.omegas.size(); ++w) {
            const double omega = cases.omegas[w];
            const long pw = std::lround(static_cast<double>(q) * omega);
            const double gap = std::fma(static_cast<double>(q), omega, -static_cast<double>(pw));
            const std::string wl = ql + ";omega=" + fmt(omega);
            const TabulatedH tw = pw == p ? t : window_table(family, n, rational_window(pw, q));
            const BarrierProfile pr = barrier_rational(tw, pw, q);
            add("modulus_1", wl, max_abs_diff(pr.values, p_omega[w].values),
                1200.0 * theta * (1.0 / static_cast<double>(q) + std::abs(gap)),
                pr.err_total + p_omega[w].err_total);
            if (gap != 0.0) {
                const BarrierProfile ps =
                    barrier_one_sided(tw, pw, q, gap > 0.0 ? Side::plus : Side::minus, kMRef);
                add("modulus_2", wl + (gap > 0.0 ? ";side=+" : ";side=-"),
                    max_abs_diff(ps.values, p_omega[w].values), 4800.0 * theta * std::abs(gap),
                    ps.err_total + p_omega[w].err_total);
            }
        }

        // Rotation estimate over two periods of the minimal orbit.
        const Configuration orb = minimal_periodic_orbit(t, p, q);
        std::vector<double> xs(orb.x);
        for (std::size_t i = 1; i < orb.x.size(); ++i) xs.push_back(orb.x[i] + static_cast<double>(p));
        double worst = 0.0;
        const double slope = static_cast<double>(p) / static_cast<double>(q);
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = i + 1; j < xs.size(); ++j)
                worst = std::max(worst, std::abs(xs[j] - xs[i] - static_cast<double>(j - i) * slope));
        add("rotation_estimate", ql, worst, 1.0, 2.0 / n, true);
    }

    // Bangert's estimate on a free minimal segment per omega.
    for (double omega : cases.omegas) {
        const long len = 2 * *std::max_element(cases.qs.begin(), cases.qs.end());
        const TabulatedH tb = window_table(family, n, Window{omega, omega});
        const long end = std::lround(static_cast<double>(len) * omega * n);
        const Configuration seg = backtrack_minimal_segment(std::vector<const TabulatedH*>(len, &tb), 0, end);
        const double alpha = rotation_number(seg);
        double worst = 0.0;
        for (std::size_t i = 0; i < seg.size(); ++i)
            for (std::size_t j = i + 1; j < seg.size(); ++j)
                worst = std::max(worst, std::abs(seg.x[j] - seg.x[i] - static_cast<double>(j - i) * alpha));
        add("bangert", "omega=" + fmt(omega) + ";length=" + std::to_string(len), worst, 2.0, 2.0 / n, true);
    }
    return rep;
}

ScanReport breakup_scan(const FamilySpec& family, const RotationSymbol& symbol, double k_min,
                        double k_max, int steps, const BarrierRequest& req) {
    if (symbol.kind == SymbolKind::rational)
        throw std::invalid_argument("plain rational symbols carry no circle verdict");
    if (!(k_min < k_max)) throw std::invalid_argument("k_min must be below k_max");
    if (steps < 2) throw std::invalid_argument("steps must be >= 2");
    ScanReport rep;
    for (int i = 0; i < steps; ++i) {
        const double k = k_min + (k_max - k_min) * i / (steps - 1);
        const BarrierProfile prof = compute_barrier(family.with_k(k), symbol, req);
        const CircleVerdict v = circle_verdict(prof);
        rep.rows.push_back(ScanRow{k, v.verdict, v.sup, prof.err_total});
    }
    ScanReport out = refine_bracket(family, symbol, rep, 0, req);
    return out;
}

ScanReport refine_bracket(const FamilySpec& family, const RotationSymbol& symbol,
                          const ScanReport& coarse, int iterations, const BarrierRequest& req) {
    ScanReport rep = coarse;
    rep.warnings.clear();
    auto locate = [&] {
        std::sort(rep.rows.begin(), rep.rows.end(), [](const ScanRow& a, const ScanRow& b) { return a.k < b.k; });
        rep.bracketed = false;
        const auto hi = std::find_if(rep.rows.begin(), rep.rows.end(),
                                     [](const ScanRow& r) { return r.verdict == Verdict::certain_absent; });
        if (hi == rep.rows.end() || hi == rep.rows.begin()) return;
        for (auto it = hi; it != rep.rows.begin();) {
            --it;
            if (it->verdict == Verdict::inconclusive) {
                rep.k_lo = it->k;
                rep.k_hi = hi->k;
                rep.bracketed = true;
                return;
            }
        }
    };
    locate();
    for (int it = 0; it < iterations && rep.bracketed; ++it) {
        const double k = 0.5 * (rep.k_lo + rep.k_hi);
        const BarrierProfile prof = compute_barrier(family.with_k(k), symbol, req);
        const CircleVerdict v = circle_verdict(prof);
        rep.rows.push_back(ScanRow{k, v.verdict, v.sup, prof.err_total});
        locate();
    }

    // Openness: neighbours within C^1 radius (a0 / 2 C0)^3 must stay CertainAbsent.
    const TwistMapLift f = make_lift(family);
    const double c1 = lemma1_constant(f, choose_annulus(f, symbol.pi(), symbol.pi()));
    rep.openness_ok = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const ScanRow& r = rep.rows[i];
        if (r.verdict != Verdict::certain_absent) continue;
        const double c0 = 14449.0 * make_generating(family.with_k(r.k)).theta + 3.0 * c1;
        const double radius = std::pow((r.sup_p - r.err_total) / (2.0 * c0), 3.0);
        for (std::size_t j : {i - 1, i + 1}) {
            if (j >= rep.rows.size()) continue;
            if (std::abs(rep.rows[j].k - r.k) <= radius && rep.rows[j].verdict != Verdict::certain_absent)
                rep.openness_ok = false;
        }
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const ScanRow& a = rep.rows[i - 1];
        const ScanRow& b = rep.rows[i];
        if (b.sup_p < a.sup_p - 2.0 * std::max(a.err_total, b.err_total))
            rep.warnings.push_back("sup_p decreases between k=" + fmt(a.k) + " and k=" + fmt(b.k));
    }
    return rep;
}

}  // namespace aubry
