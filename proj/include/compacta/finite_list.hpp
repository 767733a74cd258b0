// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "compacta/metric.hpp"

#include <utility>
#include <vector>

namespace compacta {

/// Nonempty ordered list of points of one space: the dense carrier of the
/// compact-space completion.  Duplicates and order are kept (the metric
/// quotient handles duplicates for free).
struct FiniteList {
    SpacePtr space;
    std::vector<Point> points;

    FiniteList(SpacePtr sp, std::vector<Point> pts);
    size_t size() const { return points.size(); }
};

/// Hausdorff distance between two lists of the same space:
/// sup(sup_k inf_l rho(z_k, e_l), sup_l inf_k rho(e_l, z_k)).
/// Pairwise distances are queried at n + ceil(log2(|zeta| * |eta|)) so the
/// finite min/max lattice stays within 2^-n.
CReal list_hausdorff(const FiniteList& zeta, const FiniteList& eta);

/// Concatenation; order preserved, length adds.
FiniteList concat(const FiniteList& zeta, const FiniteList& eta);

/// All grid points of a rational box at the given spacing, one interval per
/// axis.  Degenerate intervals (a point) are allowed.  The grid is within
/// Hausdorff distance spacing/2 of the full box in the sup metric.
FiniteList grid_net(const SpacePtr& space, const std::vector<std::pair<Rat, Rat>>& box,
                    const Rat& spacing);

}  // namespace compacta
