#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

namespace aubry {

enum class SymbolKind { irrational, rational, plus, minus };

/// Element of the symbol space: an irrational rotation number or a reduced
/// fraction p/q, optionally decorated with a side (p/q- < p/q < p/q+).
struct RotationSymbol {
    SymbolKind kind = SymbolKind::irrational;
    double omega = 0.0;  ///< value for irrational symbols
    long p = 0;
    long q = 1;

    /// Projection to the real line.
    double pi() const;
    bool is_rational_family() const { return kind != SymbolKind::irrational; }
};

RotationSymbol irrational_symbol(double omega);
RotationSymbol rational_symbol(long p, long q, SymbolKind kind = SymbolKind::rational);

/// Accepts "golden", "sqrt2-1", "p/q", "p/q+", "p/q-" or a decimal. Decimals
/// equal (as doubles) to a fraction with q <= 1e6 become plain rationals.
RotationSymbol parse_symbol(const std::string& text);
std::string format_symbol(const RotationSymbol& s);

/// True unless omega equals some p/q with q <= max_q as a double.
bool is_irrational(double omega, long max_q = 1000000);

/// (p, q) with 1 <= q <= n minimizing |q omega - p|, smallest q on ties.
std::pair<long, long> dirichlet_approx(double omega, long n);

/// Continued-fraction convergents p_i/q_i, at most depth of them; stops early
/// when a convergent reproduces omega exactly.
std::vector<std::pair<long, long>> convergents(double omega, int depth);

std::strong_ordering symbol_compare(const RotationSymbol& a, const RotationSymbol& b);

double golden_mean();

}  // namespace aubry
