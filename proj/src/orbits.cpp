#include "aubry/orbits.hpp"

#include <algorithm>
#include <stdexcept>

namespace aubry {

Configuration minimal_periodic_orbit(const TabulatedH& t, long p, long q) {
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    const RotationSymbol s = rational_symbol(p, q);
    const std::vector<double> col = power_column(t, s.q, s.p * t.n);
    const long start = static_cast<long>(std::min_element(col.begin(), col.end()) - col.begin());
    const std::vector<const TabulatedH*> chain(static_cast<std::size_t>(s.q), &t);
    return backtrack_minimal_segment(chain, start, start + s.p * t.n);
}

double rotation_number(const Configuration& c) {
    if (c.size() < 2) throw std::invalid_argument("configuration needs at least two points");
    return (c.x.back() - c.x.front()) / static_cast<double>(c.size() - 1);
}

int crossing_count(const Configuration& a, const Configuration& b) {
    if (a.start != b.start || a.size() != b.size())
        throw std::invalid_argument("configurations must share their index range");
    const std::size_t n = a.size();
    std::vector<int> sign(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a.x[i] - b.x[i];
        sign[i] = (d > 0.0) - (d < 0.0);
    }
    int count = 0;
    std::size_t i = 0;
    int last = 0;  // sign of the last nonzero difference
    while (i < n) {
        if (sign[i] != 0) {
            if (last != 0 && sign[i] != last) ++count;
            last = sign[i];
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && sign[j] == 0) ++j;
        if (i == 0 && j == n) return 0;  // identical
        if (i == 0 || j == n) {
            ++count;  // shared endpoint
        } else if (sign[j] != last) {
            ++count;
        }
        if (j < n) last = sign[j];
        i = j;
        if (j < n) ++i;
    }
    return count;
}

std::vector<long> mather_set_points(const BarrierProfile& profile, double slack) {
    if (slack < 0.0) throw std::invalid_argument("slack must be >= 0");
    std::vector<long> out;
    const double level = profile.err_total + slack;
    for (std::size_t a = 0; a < profile.values.size(); ++a)
        if (profile.values[a] <= level) out.push_back(static_cast<long>(a));
    return out;
}

}  // namespace aubry
