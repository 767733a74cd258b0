// SPDX-License-Identifier: Apache-2.0

#include "compacta/finite_list.hpp"

#include "compacta/errors.hpp"

#include <optional>

namespace compacta {

FiniteList::FiniteList(SpacePtr sp, std::vector<Point> pts)
    : space(std::move(sp)), points(std::move(pts)) {
    if (!space) throw ValidationError("FiniteList: null space");
    if (points.empty()) throw ValidationError("FiniteList: list must be nonempty");
    for (const auto& p : points)
        if (static_cast<int>(p.coords.size()) != space->dim())
            throw SpaceMismatch("FiniteList: point dimension mismatch");
}

namespace {

void check_same_space(const FiniteList& a, const FiniteList& b) {
    if (a.space != b.space)
        throw SpaceMismatch("lists belong to different spaces: " + a.space->name() + " vs " +
                            b.space->name());
}

// |approximant - rho(a,b)| <= 2^-p, sup metric, coordinates queried at p+1.
Rat dist_approx(const Point& a, const Point& b, int p) {
    Rat best(0);
    for (size_t i = 0; i < a.coords.size(); ++i) {
        Rat v = a.coords[i].approx(p + 1) - b.coords[i].approx(p + 1);
        if (v < 0) v = -v;
        if (v > best) best = v;
    }
    return best;
}

// sup over `from` of inf over `to` of pairwise distance approximants,
// folded into a running maximum with the usual early break.
Rat directed_sup_inf(const std::vector<Point>& from, const std::vector<Point>& to, int p,
                     Rat best) {
    for (const auto& a : from) {
        std::optional<Rat> dmin;
        bool skip = false;
        for (const auto& b : to) {
            Rat d = dist_approx(a, b, p);
            if (!dmin || d < *dmin) dmin = d;
            if (*dmin <= best) {
                skip = true;  // this row cannot raise the maximum
                break;
            }
        }
        if (!skip && *dmin > best) best = *dmin;
    }
    return best;
}

}  // namespace

CReal list_hausdorff(const FiniteList& zeta, const FiniteList& eta) {
    check_same_space(zeta, eta);
    auto za = zeta.points;
    auto ea = eta.points;
    int pad = min_n_pow2_leq(Rat(1, Int(za.size() * ea.size())));
    return CReal::from_oracle([za, ea, pad](int n) {
        int p = n + pad;
        Rat best = directed_sup_inf(za, ea, p, Rat(0));
        return directed_sup_inf(ea, za, p, best);
    });
}

FiniteList concat(const FiniteList& zeta, const FiniteList& eta) {
    check_same_space(zeta, eta);
    std::vector<Point> pts = zeta.points;
    pts.insert(pts.end(), eta.points.begin(), eta.points.end());
    return FiniteList(zeta.space, std::move(pts));
}

FiniteList grid_net(const SpacePtr& space, const std::vector<std::pair<Rat, Rat>>& box,
                    const Rat& spacing) {
    if (spacing <= 0) throw ValidationError("grid_net: spacing must be positive");
    if (box.empty() || static_cast<int>(box.size()) != space->dim())
        throw ValidationError("grid_net: box must have one interval per dimension");
    std::vector<std::vector<Rat>> axes;
    for (const auto& [lo, hi] : box) {
        if (hi < lo) throw ValidationError("grid_net: interval with hi < lo");
        std::vector<Rat> axis;
        if (lo == hi) {
            axis.push_back(lo);
        } else {
            Rat span = hi - lo;
            Int steps(numerator(span) * denominator(spacing) /
                      (denominator(span) * numerator(spacing)));  // floor(span/spacing)
            for (Int j = 0; j <= steps; ++j) axis.push_back(lo + Rat(j) * spacing);
            if (axis.back() != hi) axis.push_back(hi);
        }
        axes.push_back(std::move(axis));
    }
    std::vector<Point> pts;
    std::vector<size_t> idx(axes.size(), 0);
    for (;;) {
        std::vector<Rat> coords;
        coords.reserve(axes.size());
        for (size_t i = 0; i < axes.size(); ++i) coords.push_back(axes[i][idx[i]]);
        pts.push_back(rational_point(coords));
        size_t i = 0;
        while (i < axes.size() && ++idx[i] == axes[i].size()) idx[i++] = 0;
        if (i == axes.size()) break;
    }
    return FiniteList(space, std::move(pts));
}

}  // namespace compacta
