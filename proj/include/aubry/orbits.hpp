#pragma once

#include <vector>

#include "aubry/barrier.hpp"
#include "aubry/minplus.hpp"

namespace aubry {

/// Minimal p/q-periodic grid configuration x_0..x_q, x_q = x_0 + p, started
/// at the smallest node minimizing the periodic action.
Configuration minimal_periodic_orbit(const TabulatedH& t, long p, long q);

/// (x_end - x_start) / (end - start).
double rotation_number(const Configuration& c);

/// Crossings of the piecewise-linear Aubry graphs of a and b. A sign change
/// of a - b counts once, including through a common node; a touch without a
/// sign change counts zero; a common first or last node counts once.
int crossing_count(const Configuration& a, const Configuration& b);

/// Nodes with P(xi) <= err_total + slack.
std::vector<long> mather_set_points(const BarrierProfile& profile, double slack);

}  // namespace aubry
