#include "aubry/rational.hpp"

#include <charconv>
#include <limits>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aubry {

namespace {

int side_rank(SymbolKind k) {
    switch (k) {
        case SymbolKind::minus: return -1;
        case SymbolKind::plus: return 1;
        default: return 0;
    }
}

long parse_long(const std::string& s) {
    long v = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

}  // namespace

double golden_mean() { return (std::sqrt(5.0) - 1.0) / 2.0; }

double RotationSymbol::pi() const {
    return kind == SymbolKind::irrational ? omega : static_cast<double>(p) / static_cast<double>(q);
}

RotationSymbol irrational_symbol(double omega) {
    if (!std::isfinite(omega)) throw std::invalid_argument("rotation number must be finite");
    RotationSymbol s;
    s.kind = SymbolKind::irrational;
    s.omega = omega;
    return s;
}

RotationSymbol rational_symbol(long p, long q, SymbolKind kind) {
    if (q <= 0) throw std::invalid_argument("denominator must be positive");
    if (kind == SymbolKind::irrational) throw std::invalid_argument("rational symbol needs a side");
    const long g = std::gcd(p, q);
    RotationSymbol s;
    s.kind = kind;
    s.p = p / g;
    s.q = q / g;
    s.omega = static_cast<double>(s.p) / static_cast<double>(s.q);
    return s;
}

std::vector<std::pair<long, long>> convergents(double omega, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    std::vector<std::pair<long, long>> out;
    long double x = omega;
    long p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
    for (int i = 0; i < depth; ++i) {
        const long double a = std::floor(x);
        if (std::abs(a) > 1e12L) break;
        const long ai = static_cast<long>(a);
        const double pd = static_cast<double>(ai) * p_prev + static_cast<double>(p_prev2);
        const double qd = static_cast<double>(ai) * q_prev + static_cast<double>(q_prev2);
        if (std::abs(pd) > 9e15 || qd > 9e15) break;
        const long p = ai * p_prev + p_prev2;
        const long q = ai * q_prev + q_prev2;
        out.emplace_back(p, q);
        if (static_cast<double>(p) / static_cast<double>(q) == omega) break;
        p_prev2 = p_prev;
        q_prev2 = q_prev;
        p_prev = p;
        q_prev = q;
        const long double frac = x - a;
        if (frac <= 0.0L) break;
        x = 1.0L / frac;
    }
    return out;
}

bool is_irrational(double omega, long max_q) {
    for (const auto& [p, q] : convergents(omega, 64)) {
        if (q > max_q) break;
        if (static_cast<double>(p) / static_cast<double>(q) == omega) return false;
    }
    return true;
}

std::pair<long, long> dirichlet_approx(double omega, long n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    long best_p = 0, best_q = 1;
    double best = std::numeric_limits<double>::infinity();
    for (long q = 1; q <= n; ++q) {
        const double qd = static_cast<double>(q);
        const double p = std::nearbyint(qd * omega);
        const double err = std::abs(std::fma(qd, omega, -p));
        if (err < best) {
            best = err;
            best_p = static_cast<long>(p);
            best_q = q;
            if (err == 0.0) break;
        }
    }
    return {best_p, best_q};
}

RotationSymbol parse_symbol(const std::string& text) {
    if (text == "golden") return irrational_symbol(golden_mean());
    if (text == "sqrt2-1") return irrational_symbol(std::sqrt(2.0) - 1.0);
    if (text.empty()) throw std::invalid_argument("empty symbol");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string den = text.substr(slash + 1);
        SymbolKind kind = SymbolKind::rational;
        if (!den.empty() && (den.back() == '+' || den.back() == '-')) {
            kind = den.back() == '+' ? SymbolKind::plus : SymbolKind::minus;
            den.pop_back();
        }
        return rational_symbol(parse_long(text.substr(0, slash)), parse_long(den), kind);
    }
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw std::invalid_argument("bad symbol '" + text + "'");
    if (!is_irrational(v)) {
        for (const auto& [p, q] : convergents(v, 64))
            if (static_cast<double>(p) / static_cast<double>(q) == v) return rational_symbol(p, q);
    }
    return irrational_symbol(v);
}

std::string format_symbol(const RotationSymbol& s) {
    if (s.kind == SymbolKind::irrational) {
        if (s.omega == golden_mean()) return "golden";
        if (s.omega == std::sqrt(2.0) - 1.0) return "sqrt2-1";
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, s.omega, std::chars_format::general, 17);
        return std::string(buf, ptr);
    }
    std::string out = std::to_string(s.p) + "/" + std::to_string(s.q);
    if (s.kind == SymbolKind::plus) out += "+";
    if (s.kind == SymbolKind::minus) out += "-";
    return out;
}

std::strong_ordering symbol_compare(const RotationSymbol& a, const RotationSymbol& b) {
    if (a.is_rational_family() && b.is_rational_family()) {
        // p/q vs r/s exactly
        const auto lhs = static_cast<__int128>(a.p) * b.q;
        const auto rhs = static_cast<__int128>(b.p) * a.q;
        if (lhs != rhs) return lhs < rhs ? std::strong_ordering::less : std::strong_ordering::greater;
        return side_rank(a.kind) <=> side_rank(b.kind);
    }
    const double pa = a.pi(), pb = b.pi();
    if (pa < pb) return std::strong_ordering::less;
    if (pa > pb) return std::strong_ordering::greater;
    if (a.kind == SymbolKind::irrational && b.kind == SymbolKind::irrational)
        return std::strong_ordering::equal;
    // An irrational symbol never projects onto a rational one; doubles can
    // collide, so fall back to the side rank.
    return side_rank(a.kind) <=> side_rank(b.kind);
}

}  // namespace aubry
