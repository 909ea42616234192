#pragma once

#include <string>
#include <vector>

#include "aubry/barrier.hpp"
#include "aubry/twistmap.hpp"

namespace aubry {

struct HolderRow {
    double delta = 0.0;
    double sup_dp = 0.0;
    double budget = 0.0;
    double bound = 0.0;
    double analytic_c0 = 0.0;
    long n = 0;  ///< Dirichlet depth and m, both floor(delta^(-1/3))
    long q = 0;
    long p = 0;
    bool pass = false;
};

/// Constructive constant of the generating-function lemma for this family on
/// the annulus: 1/a + 2 |f|_{C^1} (1 + L/b).
double lemma1_constant(const TwistMapLift& f, const Annulus& ann);

/// For each delta, compares barriers of k_base and k_base + delta at the
/// irrational omega with n = m = floor(delta^(-1/3)). C0 is fitted at the
/// first (largest) delta. Grid size from the budget via the schedule rule.
std::vector<HolderRow> holder_experiment(const FamilySpec& base, double omega,
                                         const std::vector<double>& deltas, double budget,
                                         const ScheduleCaps& caps = {});

struct SuiteCases {
    std::vector<long> qs{1, 2, 3, 5, 8};
    std::vector<long> ms{8, 16, 32};
    std::vector<double> omegas{0.6180339887498949};
    int n_grid = 128;
};

struct SuiteRow {
    std::string inequality;
    std::string label;
    double left = 0.0;
    double right = 0.0;
    double budget = 0.0;  ///< numerical slack added to right
    bool pass = false;
};

struct SuiteReport {
    std::vector<SuiteRow> rows;
    bool pass() const;
};

/// Every inequality of the continuity toolkit, measured for the pair
/// (family, family with k_prime).
SuiteReport bound_suite(const FamilySpec& family, double k_prime, const SuiteCases& cases);

struct ScanRow {
    double k = 0.0;
    Verdict verdict = Verdict::inconclusive;
    double sup_p = 0.0;
    double err_total = 0.0;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    bool bracketed = false;
    double k_lo = 0.0;  ///< largest Inconclusive k below k_hi
    double k_hi = 0.0;  ///< smallest CertainAbsent k
    bool openness_ok = true;
    std::vector<std::string> warnings;
};

/// Verdict per k on a uniform grid of `steps` points. Plain rational
/// symbols are rejected with std::invalid_argument.
ScanReport breakup_scan(const FamilySpec& family, const RotationSymbol& symbol, double k_min,
                        double k_max, int steps, const BarrierRequest& req);
/// Bisects [k_lo, k_hi] of a bracketed report `iterations` times.
ScanReport refine_bracket(const FamilySpec& family, const RotationSymbol& symbol,
                          const ScanReport& coarse, int iterations, const BarrierRequest& req);

}  // namespace aubry
