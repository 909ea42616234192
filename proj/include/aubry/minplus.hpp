#pragma once

#include <vector>

#include "aubry/genfun.hpp"
#include "aubry/table.hpp"

namespace aubry {

/// Samples h at the nodes of the band. Throws BandExceeded if the band
/// reaches beyond h.band_width circles.
TabulatedH tabulate(const GeneratingFunction& h, int n, DisplacementRange band);
/// Band taken from policy.nodes(n); the table keeps the policy for clipping.
TabulatedH tabulate(const GeneratingFunction& h, int n, const BandPolicy& policy);

enum class Kernel { monotone, naive };

/// C(x, x') = min_y A(x, y) + B(y, x') over grid y, smallest y on ties.
/// The output band is the Minkowski sum of the operand bands clipped to
/// the combined policy; an argmin on the edge of its feasible range throws
/// BandExceeded.
TabulatedH conjoin(const TabulatedH& a, const TabulatedH& b, Kernel kernel = Kernel::monotone);

/// Column d of conjoin(a, b): entry r is C(r/n, (r + d)/n).
std::vector<double> conjoin_column(const TabulatedH& a, const TabulatedH& b, long d);

/// H(x, x') = T(x, x' + p).
TabulatedH shift(const TabulatedH& t, long p);

/// H_(q,p)(x, x') = t^{*q}(x, x' + p), built by balanced splitting
/// q = floor(q/2) + ceil(q/2).
TabulatedH power_conjunction(const TabulatedH& t, long q, long p = 0,
                             Kernel kernel = Kernel::monotone);

/// Column d of t^{*q} without materializing the last product.
std::vector<double> power_column(const TabulatedH& t, long q, long d);

/// Minimal grid path through the chain between lift nodes x0 and xq.
/// Divide and conquer over the chain: only value vectors are held, no
/// argmin tables.
Configuration backtrack_minimal_segment(const std::vector<const TabulatedH*>& chain, long x0,
                                        long xq);
Configuration backtrack_minimal_segment(const std::vector<TabulatedH>& chain, long x0, long xq);

double chain_action(const std::vector<const TabulatedH*>& chain, const std::vector<long>& nodes);

/// steps * lip * 2 / n: the first-order rounding bound.
double grid_error_bound(const TabulatedH& t, long steps);
/// steps * (curvature / (4 n^2) + value_error): rounding a stationary
/// configuration node by node costs only its Hessian term.
double smooth_grid_error_bound(const TabulatedH& t, long steps);

}  // namespace aubry
