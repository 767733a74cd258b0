// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "compacta/creal.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace compacta {

/// An effective point of some metric space: one CReal per coordinate
/// (one coordinate for the real line).  A Point must only be used with
/// the space that created it; dimensions are checked at use sites.
struct Point {
    std::vector<CReal> coords;
};

/// A complete computable metric space.  The two concrete instances are the
/// real line and R^d under the sup metric (the sup metric makes grid nets
/// exact epsilon-nets).
class MetricSpace {
public:
    MetricSpace(std::string name, int dim) : name_(std::move(name)), dim_(dim) {}

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }

    /// Sup metric: max_i |p_i - q_i| as a CReal.
    CReal dist(const Point& p, const Point& q) const;

    /// dist(p, q).approx(n) computed without constructing the CReal.
    /// Returns the identical rational; used on hot paths where the distance
    /// is queried once.
    Rat dist_approx(const Point& p, const Point& q, int n) const;

    /// Limit of a regular Cauchy chain.  `chain` is 1-based and must carry
    /// the certificate dist(chain(k), chain(k+1)) <= 2^-(k+1); the returned
    /// point satisfies dist(limit, chain(k)) <= 2^-k.  chain is queried
    /// lazily and memoized.
    Point limit(std::function<Point(int)> chain) const;

private:
    std::string name_;
    int dim_;
};

using SpacePtr = std::shared_ptr<const MetricSpace>;

/// The real line (rho(x, x') = |x - x'|).  Cached: repeated calls return the
/// same instance, so identity comparison works as a same-space check.
SpacePtr real_line();

/// R^d with the sup metric, d >= 1.  Cached per dimension.
SpacePtr real_box_space(int d);

/// Convenience: a point with rational coordinates.
Point rational_point(const std::vector<Rat>& coords);
Point rational_point(const Rat& x);

}  // namespace compacta
