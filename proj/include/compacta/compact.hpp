// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "compacta/finite_list.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace compacta {

/// A nonempty compact: a regular Cauchy sequence of finite lists under the
/// Hausdorff metric, exposed as a net oracle n |-> FiniteList with
/// h(net(n), K) <= 2^-n.  Nets are memoized per precision; instances are
/// immutable and safe to query concurrently.
class Compact {
public:
    /// `member_nets` is the constructor's claim that every point of every
    /// net is itself a member of the compact (true for lists, grids and
    /// their unions and images, false for filtered pieces).  Point selection
    /// uses it to return net points directly instead of building limits.
    Compact(SpacePtr space, std::function<FiniteList(int)> net_fn, bool member_nets = false);

    const SpacePtr& space() const;
    /// Reference into the per-instance memo; stable while the compact (or a
    /// copy of it) is alive.
    const FiniteList& net(int n) const;

    bool member_nets() const;

    /// Stable identity of the underlying oracle, usable as a cache key as
    /// long as some copy of this Compact is kept alive.
    const void* id() const;

private:
    struct State;
    std::shared_ptr<State> state_;
};

/// Dense embedding of a list: constant net.
Compact compact_of_list(const FiniteList& zeta);

Compact singleton_compact(const SpacePtr& space, const Point& x);

/// The finite grid of a rational box, with coarse-precision nets thinned by
/// striding so that queries at low precision stay cheap.  The member set is
/// exactly the full grid (same compact as compact_of_list(grid_net(...))).
Compact grid_compact(const SpacePtr& space, const std::vector<std::pair<Rat, Rat>>& box,
                     const Rat& spacing);

/// Same point of the completion with deduplicated nets: net(n) keeps a
/// subset of net(n+1) of the input with pairwise gaps above 2^-(n+2).
/// Breaks the size blowup of iterated unions of overlapping pieces.
Compact compact_thin(const Compact& k);

/// Deduplicated union of several compacts: walks the parts' nets at n+1 and
/// keeps points with pairwise gaps above 2^-(n+2), without materializing the
/// concatenated list.  Same point of the completion as compact_thin applied
/// to the iterated compact_union of the parts.
Compact compact_thin_union(const SpacePtr& space, std::vector<Compact> parts);

/// Completion metric: approx(n) evaluates the list Hausdorff distance of the
/// two nets at precision n+2.
CReal compact_dist(const Compact& a, const Compact& b);

/// net(n) = concatenation of the two nets at n; regular by the contraction
/// law for concatenation.
Compact compact_union(const Compact& a, const Compact& b);

/// Tolerance-resolved majorization K' <= K (i.e. K' union K = K).
/// GreaterThanA refutes at resolution tol/2, LessThanB affirms at tol.
Verdict majorizes(const Compact& kp, const Compact& k, const Rat& tol);

/// Incidence x in M(K), via majorizes({x}, K, tol).
Verdict is_member(const Point& x, const Compact& k, const Rat& tol);

/// Given x in M(K) and a list zeta with rho(K, zeta) < eps, returns a
/// 0-based index k with rho(x, zeta_k) < eps (verified).  Throws
/// BudgetExceeded if no index verifies, which signals violated preconditions.
size_t nearest_index(const Point& x, const Compact& k, const FiniteList& zeta, const Rat& eps,
                     int budget = 64);

/// Given rho(K, zeta) < eps, returns a member of K within eps of zeta_k
/// (0-based k), built as the limit of a chain through ever-finer nets.
Point select_point(const Compact& k, const FiniteList& zeta, size_t index, const Rat& eps,
                   int budget = 64);

/// select_point specialized to K's own net at precision n >= 0: the net
/// contract already certifies the proximity, so no search is needed.
/// Returns a member of K within 2^-(n-1) of net(n).points[index].
Point select_net_point(const Compact& k, int n, size_t index);

enum class ComponentTag { First, Second };

/// Given x in M(K1 union K2), produces a point within eps of x that is a
/// member of one of the components, and says which.
std::pair<ComponentTag, Point> component_select(const Point& x, const Compact& k1,
                                                const Compact& k2, const Rat& eps,
                                                int budget = 64);

struct SplitResult {
    enum class Tag { Miss, Piece };
    Tag tag;
    std::optional<Compact> piece;  // present iff tag == Piece

    static SplitResult miss() { return {Tag::Miss, std::nullopt}; }
    static SplitResult of(Compact k) { return {Tag::Piece, std::move(k)}; }
};

/// Either certifies that M(K) misses the open eps-ball around x, or returns
/// a piece K' <= K whose member set lies inside the 2*eps-ball and contains
/// every member of K inside the eps-ball.  The piece is built by filtering
/// ever-finer nets of K with a hysteresis band around the ball boundary.
SplitResult ball_split(const Compact& k, const Point& x, const Rat& eps);

/// Many ball_split calls against one (K, eps): spatial indexes of the
/// queried nets are built once and shared across centers.  split(x) returns
/// exactly what ball_split(k, x, eps) returns; the index only skips points
/// whose comparisons have a forced outcome.
struct BallSplitShared;

class BallSplitter {
public:
    BallSplitter(Compact k, Rat eps);
    SplitResult split(const Point& x) const;

private:
    std::shared_ptr<BallSplitShared> shared_;
};

/// (sup M(K), inf M(K)) for a compact over the real line; both are members.
std::pair<CReal, CReal> sup_inf(const Compact& k);

}  // namespace compacta
