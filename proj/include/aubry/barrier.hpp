#pragma once

#include <optional>
#include <vector>

#include "aubry/minplus.hpp"
#include "aubry/rational.hpp"
#include "aubry/twistmap.hpp"

namespace aubry {

enum class Side { plus, minus };

/// Sampled barrier P(xi) at the table nodes with an itemized error budget.
struct BarrierProfile {
    RotationSymbol symbol;
    std::vector<double> xi;
    std::vector<double> values;
    double err_omega = 0.0;
    double err_m = 0.0;
    double err_grid = 0.0;
    double err_total = 0.0;
    long q = 1;
    long p = 0;
    long m = 0;
    int n = 0;
    long argmin = 0;  ///< node where the diagonal minimum is attained

    double sup() const;
};

/// P_{p/q}(xi) = H(xi, xi + p) - min_eta H(eta, eta + p) with H = T^{*q}.
BarrierProfile barrier_rational(const TabulatedH& t, long p, long q);
/// Barrier of H_(q,p) at rotation +-1/m; err_m = 16 theta / m.
BarrierProfile barrier_one_sided(const TabulatedH& t, long p, long q, Side side, long m);
/// One-sided barrier at the Dirichlet approximant of omega, side from the
/// sign of q omega - p, plus err_omega = 4800 theta |q omega - p|.
BarrierProfile barrier_irrational(const TabulatedH& t, double omega, long n, long m);

enum class Verdict { certain_absent, inconclusive };
std::string verdict_name(Verdict v);

struct CircleVerdict {
    Verdict verdict = Verdict::inconclusive;
    double sup = 0.0;
    long witness = 0;
};

/// CertainAbsent iff some node value exceeds err_total.
CircleVerdict circle_verdict(const BarrierProfile& profile);

/// Closed rotation window per elementary step, in circles.
struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

Window rational_window(long p, long q);
Window one_sided_window(long p, long q, Side side, long m);
/// Per-step band margin 12 + ceil(max |omega|) in circles.
int default_margin(Window w);
/// Tabulates the family on the band of the window; the generating function
/// is built wide enough for the margin.
TabulatedH window_table(const FamilySpec& family, int n, Window w, int margin = -1);

struct ScheduleCaps {
    int max_grid = 4096;
    long max_steps = 65536;  ///< bound on q * m
};

struct BarrierRequest {
    double budget = 0.02;
    std::optional<int> n_grid;
    std::optional<long> m;
    std::optional<long> n_dirichlet;
    std::optional<int> margin;  ///< per-step band margin in circles
    ScheduleCaps caps;
};

/// Parameters chosen for a budget, as m = ceil(48 theta / eps),
/// 4800 theta / (n + 1) <= eps / 3 and err_grid <= eps / 3.
struct Schedule {
    long p = 0;
    long q = 1;
    long m = 0;            ///< 0 for plain rationals
    long n_dirichlet = 0;  ///< 0 unless irrational
    int n_grid = 64;
    std::optional<Side> side;
};

Schedule schedule_for(const FamilySpec& family, const RotationSymbol& symbol, const BarrierRequest& req);
BarrierProfile compute_barrier(const FamilySpec& family, const RotationSymbol& symbol,
                               const BarrierRequest& req);

}  // namespace aubry
