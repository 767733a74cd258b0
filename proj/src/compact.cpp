// SPDX-License-Identifier: Apache-2.0

#include "compacta/compact.hpp"

#include "compacta/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace compacta {

struct Compact::State {
    SpacePtr space;
    std::function<FiniteList(int)> fn;
    bool member_nets = false;
    mutable std::map<int, FiniteList> memo;
    mutable std::mutex mu;
};

Compact::Compact(SpacePtr space, std::function<FiniteList(int)> net_fn, bool member_nets) {
    if (!space) throw ValidationError("Compact: null space");
    state_ = std::make_shared<State>();
    state_->space = std::move(space);
    state_->fn = std::move(net_fn);
    state_->member_nets = member_nets;
}

const SpacePtr& Compact::space() const { return state_->space; }

bool Compact::member_nets() const { return state_->member_nets; }

const void* Compact::id() const { return state_.get(); }

const FiniteList& Compact::net(int n) const {
    {
        std::lock_guard<std::mutex> lock(state_->mu);
        auto it = state_->memo.find(n);
        if (it != state_->memo.end()) return it->second;
    }
    FiniteList list = state_->fn(n);
    if (list.space != state_->space) throw SpaceMismatch("Compact: net produced a foreign list");
    std::lock_guard<std::mutex> lock(state_->mu);
    auto [it, _] = state_->memo.emplace(n, std::move(list));
    return it->second;
}

namespace {

void check_same_space(const Compact& a, const Compact& b) {
    if (a.space() != b.space())
        throw SpaceMismatch("compacts belong to different spaces: " + a.space()->name() +
                            " vs " + b.space()->name());
}

Int rat_floor(const Rat& q) {
    Int f = numerator(q) / denominator(q);
    if (q < 0 && f * denominator(q) != numerator(q)) f -= 1;
    return f;
}

// Bucket index of a net on a grid of cells of width 1/inv_w, keyed by
// floored scaled coordinate approximants at precision `prec`.  A pure
// prefilter: queries return a superset of the points within the covered
// radius and the caller re-runs the original certified comparison on each
// candidate, so outcomes never change.
struct NetIndex {
    Rat inv_w;
    int prec;
    std::map<std::vector<Int>, std::vector<size_t>> buckets;
};

NetIndex build_net_index(const std::vector<Point>& points, int dim, const Rat& inv_w, int prec) {
    NetIndex idx{inv_w, prec, {}};
    std::vector<Int> key(dim);
    for (size_t i = 0; i < points.size(); ++i) {
        for (int c = 0; c < dim; ++c)
            key[c] = rat_floor(points[i].coords[c].approx(prec) * inv_w);
        idx.buckets[key].push_back(i);
    }
    return idx;
}

bool point_exact(const Point& p) {
    for (const auto& c : p.coords)
        if (!c.exact_value()) return false;
    return true;
}

// All list indices whose cell is within `cells` of the center's cell in
// every coordinate, ascending.  Points whose scaled coordinate approximants
// all differ from the center's by less than `cells` cell widths are
// guaranteed to be included.
std::vector<size_t> index_candidates(const NetIndex& idx, const Point& center, int cells) {
    const int dim = static_cast<int>(center.coords.size());
    std::vector<Int> ckey(dim);
    for (int c = 0; c < dim; ++c)
        ckey[c] = rat_floor(center.coords[c].approx(idx.prec) * idx.inv_w);
    std::vector<size_t> out;
    std::vector<int> off(dim, -cells);
    std::vector<Int> probe(dim);
    for (;;) {
        for (int c = 0; c < dim; ++c) probe[c] = ckey[c] + off[c];
        auto it = idx.buckets.find(probe);
        if (it != idx.buckets.end())
            out.insert(out.end(), it->second.begin(), it->second.end());
        int c = 0;
        while (c < dim && off[c] == cells) off[c++] = -cells;
        if (c == dim) break;
        ++off[c];
    }
    std::sort(out.begin(), out.end());
    return out;
}

// First index of `candidates` minimizing the distance approximant to `target`
// at precision p.  Deterministic.
size_t argmin_dist(const std::vector<Point>& candidates, const Point& target,
                   const SpacePtr& space, int p) {
    size_t best = 0;
    Rat best_d;
    for (size_t i = 0; i < candidates.size(); ++i) {
        Rat d = space->dist_approx(candidates[i], target, p);
        if (i == 0 || d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

}  // namespace

Compact compact_of_list(const FiniteList& zeta) {
    return Compact(zeta.space, [zeta](int) { return zeta; }, true);
}

Compact singleton_compact(const SpacePtr& space, const Point& x) {
    return compact_of_list(FiniteList(space, {x}));
}

Compact grid_compact(const SpacePtr& space, const std::vector<std::pair<Rat, Rat>>& box,
                     const Rat& spacing) {
    if (spacing <= 0) throw ValidationError("grid_compact: spacing must be positive");
    FiniteList full = grid_net(space, box, spacing);
    auto axes_box = box;
    return Compact(space, [space, full, axes_box, spacing](int n) -> FiniteList {
        // stride so that thinned-grid error <= 2^-n; no thinning once the
        // requested spacing is at least as fine as needed
        Rat ratio = pow2(-n) / spacing;
        Int stride_i(numerator(ratio) / denominator(ratio));
        if (stride_i < 2) return full;
        Rat coarse = spacing * Rat(stride_i);
        return grid_net(space, axes_box, coarse);
    }, true);
}

Compact compact_thin(const Compact& k) {
    return compact_thin_union(k.space(), {k});
}

Compact compact_thin_union(const SpacePtr& space, std::vector<Compact> parts) {
    if (parts.empty()) throw ValidationError("compact_thin_union: no parts");
    bool members = true;
    for (const auto& part : parts) {
        if (part.space() != space)
            throw SpaceMismatch("compact_thin_union: part from a foreign space");
        members = members && part.member_nets();
    }
    return Compact(space, [space, parts = std::move(parts)](int n) {
        std::vector<Point> kept;
        Rat gap = pow2(-(n + 2));
        // Bucket kept points on a grid of width 2 * gap keyed by coordinate
        // approximants at n+4.  Points passing the dedup distance test have
        // approximants within 7 * gap / 4 per coordinate, so every relevant
        // kept point is in one of the 3^dim adjacent buckets; the certified
        // distance test below still decides, the grid only prunes the scan.
        Rat inv_w = pow2(n + 1);
        const int dim = space->dim();
        using Key = std::vector<Int>;
        std::map<Key, std::vector<size_t>> buckets;
        auto key_of = [&](const Point& p) {
            Key key(dim);
            for (int i = 0; i < dim; ++i)
                key[i] = rat_floor(p.coords[i].approx(n + 4) * inv_w);
            return key;
        };
        for (const auto& part : parts) {
            for (const auto& p : part.net(n + 1).points) {
                Key key = key_of(p);
                bool dup = false;
                Key probe(dim);
                // walk the 3^dim neighborhood by mixed-radix counter
                std::vector<int> off(dim, -1);
                for (;;) {
                    for (int i = 0; i < dim; ++i) probe[i] = key[i] + off[i];
                    auto it = buckets.find(probe);
                    if (it != buckets.end()) {
                        for (size_t qi : it->second) {
                            if (space->dist_approx(p, kept[qi], n + 4) <= gap) {
                                dup = true;
                                break;
                            }
                        }
                        if (dup) break;
                    }
                    int i = 0;
                    while (i < dim && off[i] == 1) off[i++] = -1;
                    if (i == dim) break;
                    ++off[i];
                }
                if (!dup) {
                    buckets[key].push_back(kept.size());
                    kept.push_back(p);
                }
            }
        }
        // dropped points sit within 2^-(n+2) + 2^-(n+4) of a kept one, so
        // h(kept, union) <= 2^-(n+1) + 2^-(n+2) + 2^-(n+4) < 2^-n
        return FiniteList(space, std::move(kept));
    }, members);
}

CReal compact_dist(const Compact& a, const Compact& b) {
    check_same_space(a, b);
    return CReal::from_oracle(
        [a, b](int n) { return list_hausdorff(a.net(n + 2), b.net(n + 2)).approx(n + 1); });
}

Compact compact_union(const Compact& a, const Compact& b) {
    check_same_space(a, b);
    return Compact(a.space(), [a, b](int n) { return concat(a.net(n), b.net(n)); },
                   a.member_nets() && b.member_nets());
}

Verdict majorizes(const Compact& kp, const Compact& k, const Rat& tol) {
    if (tol <= 0) throw ValidationError("majorizes: tol must be positive");
    check_same_space(kp, k);
    return approx_compare(compact_dist(compact_union(kp, k), k), tol / 2, tol);
}

Verdict is_member(const Point& x, const Compact& k, const Rat& tol) {
    return majorizes(singleton_compact(k.space(), x), k, tol);
}

size_t nearest_index(const Point& x, const Compact& k, const FiniteList& zeta, const Rat& eps,
                     int budget) {
    if (eps <= 0) throw ValidationError("nearest_index: eps must be positive");
    if (zeta.space != k.space()) throw SpaceMismatch("nearest_index: list from a foreign space");
    std::vector<CReal> dists;
    dists.reserve(zeta.size());
    for (const auto& p : zeta.points) dists.push_back(k.space()->dist(x, p));
    for (int j = 1; j <= budget; ++j) {
        Rat a = eps * (Rat(1) - pow2(-j));
        for (size_t i = 0; i < dists.size(); ++i) {
            if (approx_compare(dists[i], a, eps) == Verdict::LessThanB) return i;
        }
    }
    throw BudgetExceeded("nearest_index: no index verified within budget");
}

namespace {

// Limit of the chain x_1 = target, x_{l+1} = nearest net point, through
// nets net(m+2), net(m+3), ...; rho(x_l, x_{l+1}) < 2^-(m+l), so the limit
// certificate holds for m >= 1.  Requires rho(target, K) < 2^-(m-1).
Point chain_to_member(const Compact& k, const Point& target, int m) {
    SpacePtr space = k.space();
    struct Chain {
        Compact k;
        SpacePtr space;
        Point target;
        int m;
        std::map<int, Point> memo;
        std::mutex mu;
        Chain(Compact kk, SpacePtr sp, Point t, int mm)
            : k(std::move(kk)), space(std::move(sp)), target(std::move(t)), m(mm) {}
        Point at(int l) {
            std::lock_guard<std::mutex> lock(mu);
            return at_unlocked(l);
        }
        Point at_unlocked(int l) {
            auto it = memo.find(l);
            if (it != memo.end()) return it->second;
            Point prev = l == 1 ? target : at_unlocked(l - 1);
            const auto& net = k.net(m + l + 1).points;
            size_t idx = argmin_dist(net, prev, space, l == 1 ? m + 3 : m + l + 3);
            return memo.emplace(l, net[idx]).first->second;
        }
    };
    auto chain = std::make_shared<Chain>(k, space, target, m);
    return space->limit([chain](int l) { return chain->at(l); });
}

}  // namespace

Point select_point(const Compact& k, const FiniteList& zeta, size_t index, const Rat& eps,
                   int budget) {
    if (eps <= 0) throw ValidationError("select_point: eps must be positive");
    if (index >= zeta.size()) throw ValidationError("select_point: index out of range");
    if (zeta.space != k.space()) throw SpaceMismatch("select_point: list from a foreign space");

    // fix m >= 1 with 2^-(m-1) < eps - rho(K, zeta)
    CReal rho = compact_dist(k, compact_of_list(zeta));
    int m = 0;
    for (int cand = 1; cand <= budget; ++cand) {
        Rat g = eps - pow2(-(cand - 1));
        if (g <= 0) continue;
        if (approx_compare(rho, g - pow2(-cand), g) == Verdict::LessThanB) {
            m = cand;
            break;
        }
    }
    if (m == 0) throw BudgetExceeded("select_point: could not certify rho(K, zeta) < eps");
    return chain_to_member(k, zeta.points[index], m);
}

Point select_net_point(const Compact& k, int n, size_t index) {
    if (n < 0) throw ValidationError("select_net_point: precision must be >= 0");
    const FiniteList& net = k.net(n);
    if (index >= net.size()) throw ValidationError("select_net_point: index out of range");
    // net points of member-net compacts are members already
    if (k.member_nets()) return net.points[index];
    // rho(net(n), K) <= 2^-n by the net contract, no certification needed;
    // chain displacement adds 2^-(n+1) + 2^-(n+2), under 2^-(n-1) total
    return chain_to_member(k, net.points[index], n + 1);
}

std::pair<ComponentTag, Point> component_select(const Point& x, const Compact& k1,
                                                const Compact& k2, const Rat& eps, int budget) {
    if (eps <= 0) throw ValidationError("component_select: eps must be positive");
    check_same_space(k1, k2);
    int p = min_n_pow2_leq(eps) + 2;  // 2^-p <= eps/4
    FiniteList z1 = k1.net(p), z2 = k2.net(p);
    FiniteList both = concat(z1, z2);
    size_t idx = nearest_index(x, compact_union(k1, k2), both, eps / 2, budget);
    if (idx < z1.size()) {
        return {ComponentTag::First, select_point(k1, z1, idx, eps / 2, budget)};
    }
    return {ComponentTag::Second, select_point(k2, z2, idx - z1.size(), eps / 2, budget)};
}

// Net indexes of one (K, eps) pair, built lazily per precision and shared by
// every center split against that pair.  Cell width eps: every comparison in
// the split filters concerns distances below 1.8 * eps, so candidates two
// cells out cover all points whose verdict is not already forced.
struct BallSplitShared {
    Compact k;
    Rat eps;
    Rat inv_eps;
    int s;  // 2^-s <= eps
    std::map<int, NetIndex> indexes;
    std::mutex mu;

    BallSplitShared(Compact kk, Rat e, int ss)
        : k(std::move(kk)), eps(std::move(e)), inv_eps(Rat(1) / eps), s(ss) {}

    const NetIndex& index_at(int prec) {
        std::lock_guard<std::mutex> lock(mu);
        auto it = indexes.find(prec);
        if (it != indexes.end()) return it->second;
        const FiniteList& net = k.net(prec);
        return indexes
            .emplace(prec, build_net_index(net.points, k.space()->dim(), inv_eps, prec))
            .first->second;
    }
};

namespace {

// Lazily built stages of a ball-split piece.  Stage k filters net(k+6+s) of
// K through the hysteresis band around the ball boundary; a point in the
// band is also kept when it is certified close to the previous stage, which
// keeps consecutive stages within 2^-(k+2)*eps of each other.
struct SplitStages {
    std::shared_ptr<BallSplitShared> shared;
    Point center;
    bool center_exact;
    std::map<int, std::vector<Point>> stages;
    // center distances memoized across stages: for exact point pairs
    // dist_approx does not depend on the precision argument, and nets of a
    // finite compact saturate to one stable list, so the value carries over
    const FiniteList* cached_net = nullptr;
    std::vector<char> dist_known;
    std::vector<Rat> dist_memo;
    std::mutex mu;

    SplitStages(std::shared_ptr<BallSplitShared> sh, Point c)
        : shared(std::move(sh)), center(std::move(c)), center_exact(point_exact(center)) {}

    Rat center_dist(const FiniteList& net, size_t i, int prec) {
        const SpacePtr& space = shared->k.space();
        if (!center_exact) return space->dist_approx(center, net.points[i], prec);
        if (cached_net != &net) {
            cached_net = &net;
            dist_known.assign(net.size(), 0);
            dist_memo.assign(net.size(), Rat());
        }
        if (dist_known[i]) return dist_memo[i];
        Rat d = space->dist_approx(center, net.points[i], prec);
        if (point_exact(net.points[i])) {
            dist_known[i] = 1;
            dist_memo[i] = d;
        }
        return d;
    }

    std::vector<Point> build(int stage) {
        const Rat& eps = shared->eps;
        const int s = shared->s;
        const FiniteList& netlist = shared->k.net(stage + 6 + s);
        const auto& net = netlist.points;
        const NetIndex& idx = shared->index_at(stage + 6 + s);
        std::vector<Point> kept;
        // threshold for "clearly inside": approximant at precision stage+6+s
        // compared against (3/2 + 2^-(stage+2)) * eps, decreasing in stage
        Rat t = eps * (Rat(3, 2) + pow2(-(stage + 2)));
        Rat prec = pow2(-(stage + 6 + s));
        const SpacePtr& space = shared->k.space();
        if (stage == 1) {
            for (size_t i : index_candidates(idx, center, 2))
                if (center_dist(netlist, i, stage + 6 + s) < t) kept.push_back(net[i]);
            return kept;
        }
        const auto& prev = at(stage - 1);
        Rat near_lo = eps * pow2(-(stage + 4));  // >= net spacing bound 3*2^-(stage+6)*eps
        Rat near_hi = eps * pow2(-(stage + 3));
        // comparison precision and midpoint of approx_compare(., near_lo, near_hi)
        int n_cmp = min_n_pow2_less(Rat((near_hi - near_lo) / 4));
        Rat mid = (near_lo + near_hi) / 2;
        // every previous-stage point sits within 17*eps/10 of the center, so
        // beyond far_cut the near-previous comparison has a forced verdict
        // and the scan can be skipped without changing the outcome
        Rat far_cut = eps * Rat(17, 10) + near_hi + prec;
        // previous-stage points beyond cell width 2*near_hi of a band point
        // are certified farther than mid + 2^-n_cmp even through the key and
        // comparison approximants, so the bucket window decides for them
        Rat w = 2 * near_hi;
        std::optional<NetIndex> prev_idx;
        for (size_t i : index_candidates(idx, center, 2)) {
            const Point& p = net[i];
            Rat d = center_dist(netlist, i, stage + 6 + s);
            if (d < t) {
                kept.push_back(p);
                continue;
            }
            if (d > far_cut) continue;
            if (!prev_idx)
                prev_idx = build_net_index(prev, space->dim(), Rat(1) / w, n_cmp + 3);
            for (size_t qi : index_candidates(*prev_idx, p, 1)) {
                if (!(space->dist_approx(p, prev[qi], n_cmp) > mid)) {
                    kept.push_back(p);
                    break;
                }
            }
        }
        return kept;
    }

    const std::vector<Point>& at(int stage) {
        auto it = stages.find(stage);
        if (it != stages.end()) return it->second;
        auto kept = build(stage);
        if (kept.empty())
            throw EmptyPiece("ball_split: filter emptied the candidate list at stage " +
                             std::to_string(stage));
        return stages.emplace(stage, std::move(kept)).first->second;
    }

    const std::vector<Point>& at_locked(int stage) {
        std::lock_guard<std::mutex> lock(mu);
        return at(stage);
    }
};

}  // namespace

BallSplitter::BallSplitter(Compact k, Rat eps) {
    if (eps <= 0) throw ValidationError("ball_split: eps must be positive");
    int s = min_n_pow2_leq(eps);
    shared_ = std::make_shared<BallSplitShared>(std::move(k), std::move(eps), s);
}

SplitResult BallSplitter::split(const Point& x) const {
    const Compact& k = shared_->k;
    const Rat& eps = shared_->eps;
    const int s = shared_->s;

    // Stage-1 dichotomy: every point beyond 5*eps/4, or some point within
    // 3*eps/2.  If every verdict lands on the far side, the member set
    // misses the eps-ball (members are within 2^-(7+s) <= eps/128 of net
    // points).  Points outside the candidate cells are certified far, so
    // only candidates need a verdict.
    const auto& first = k.net(7 + s).points;
    const NetIndex& idx = shared_->index_at(7 + s);
    bool inhabited = false;
    int n_cmp = min_n_pow2_less(Rat(eps / 16));  // band width eps/4, quartered
    Rat mid = eps * Rat(11, 8);
    for (size_t i : index_candidates(idx, x, 2)) {
        if (!(k.space()->dist_approx(x, first[i], n_cmp) > mid)) {
            inhabited = true;
            break;
        }
    }
    if (!inhabited) return SplitResult::miss();

    auto stages = std::make_shared<SplitStages>(shared_, x);
    SpacePtr space = k.space();
    // rho(stage_j, piece) <= 2^-(j+3)*eps < 2^-n for j >= n - s - 2
    Compact piece(space, [stages, space, s](int n) {
        int stage = std::max(1, n - s - 2);
        return FiniteList(space, stages->at_locked(stage));
    });
    return SplitResult::of(std::move(piece));
}

SplitResult ball_split(const Compact& k, const Point& x, const Rat& eps) {
    return BallSplitter(k, eps).split(x);
}

std::pair<CReal, CReal> sup_inf(const Compact& k) {
    if (k.space()->dim() != 1)
        throw SpaceMismatch("sup_inf: compact must live over the real line");
    CReal sup = CReal::from_oracle([k](int n) {
        const auto& pts = k.net(n + 1).points;
        Rat best = pts[0].coords[0].approx(n + 1);
        for (size_t i = 1; i < pts.size(); ++i) best = std::max(best, pts[i].coords[0].approx(n + 1));
        return best;
    });
    CReal inf = CReal::from_oracle([k](int n) {
        const auto& pts = k.net(n + 1).points;
        Rat best = pts[0].coords[0].approx(n + 1);
        for (size_t i = 1; i < pts.size(); ++i) best = std::min(best, pts[i].coords[0].approx(n + 1));
        return best;
    });
    return {sup, inf};
}

}  // namespace compacta
