// SPDX-License-Identifier: Apache-2.0

#include "compacta/modulus.hpp"

#include "compacta/errors.hpp"

#include <algorithm>
#include <climits>
#include <list>
#include <mutex>

namespace compacta {

namespace {

// Caches pi on compact identity; keeps the key compacts alive so their
// state addresses stay valid, and keeps the image compacts' net memos warm
// across the refinement chain.  Small LRU: the base compact and the current
// refinement stages are re-queried and stay resident, while ball pieces are
// queried once and must not be retained (each pins its whole ancestor
// chain).  Evicting an entry drops its pinned key as well, so a reused
// address can never produce a stale hit.
ImageOracle memoize_oracle(const ImageOracle& pi) {
    struct Entry {
        const void* key;
        Compact compact;
        Compact image;
    };
    struct Cache {
        std::list<Entry> entries;  // front = most recent
        std::mutex mu;
    };
    constexpr size_t kCapacity = 32;
    auto cache = std::make_shared<Cache>();
    ImageOracle inner = pi;
    return [inner, cache](const Compact& k) -> Compact {
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            for (auto it = cache->entries.begin(); it != cache->entries.end(); ++it) {
                if (it->key == k.id()) {
                    cache->entries.splice(cache->entries.begin(), cache->entries, it);
                    return cache->entries.front().image;
                }
            }
        }
        Compact img = inner(k);
        std::lock_guard<std::mutex> lock(cache->mu);
        cache->entries.push_front(Entry{k.id(), k, img});
        if (cache->entries.size() > kCapacity) cache->entries.pop_back();
        return cache->entries.front().image;
    };
}

// Certified low member (the search realizing dif:1:3): a member y of `base`
// with dist(anchor, y) < radius and f(y) < sup - margin.  Distance is
// certified on the net representative (the selected member sits within
// 2^-(t-1) of it), so a member is only constructed for candidates that
// already pass; the value band tightens as the search proceeds, so any true
// witness with positive slack is eventually accepted.
Point find_low_member(const EffectiveMap& f, const Compact& base, const CReal& sup,
                      const Rat& margin, const Point& anchor, const Rat& radius, int budget) {
    const SpacePtr& space = base.space();
    for (int t = 1; t <= budget; ++t) {
        const FiniteList& net = base.net(t);
        for (size_t idx = 0; idx < net.size(); ++idx) {
            Rat d = space->dist_approx(anchor, net.points[idx], t + 2);
            if (d + pow2(-(t + 2)) + pow2(-(t - 1)) >= radius) continue;
            Point y = select_net_point(base, t, idx);
            CReal gap = sup - f.apply(y).coords[0];
            if (approx_compare(gap, margin, margin * (Rat(1) + pow2(-t))) ==
                Verdict::GreaterThanA)
                return y;
        }
    }
    throw BudgetExceeded("find_low_member: no certified low member within budget");
}

// Least n with a certificate that osc < (n+1) * eps / 60.
int least_level(const CReal& osc, const Rat& eps) {
    Rat hi = osc.approx(0) + 2;
    Rat step = eps / 60;
    // forced acceptance once 7/8 * (n+1) * step >= hi
    long cap = 2;
    while (Rat(cap) * step * Rat(7, 8) < hi) cap *= 2;
    for (long n = 0; n <= cap; ++n) {
        Rat b = Rat(n + 1) * step;
        if (approx_compare(osc, b * Rat(7, 8), b) == Verdict::LessThanB)
            return static_cast<int>(n);
    }
    throw BudgetExceeded("least_level: oscillation certificate not found");
}

void check_real_valued(const EffectiveMap& f, const char* who) {
    if (f.codomain->dim() != 1)
        throw SpaceMismatch(std::string(who) + ": map must take values in the real line");
}

ClassCertificate refine_impl(const EffectiveMap& f, const ImageOracle& pi, const Compact& k,
                             const CReal& sup, const ClassCertificate& cert, int budget) {
    int n = cert.n;
    const Rat& e = cert.eps;
    const FiniteList& zeta = k.net(n + 3);  // rho(K, zeta) <= 2^-n-3 < 2^-n-2

    std::vector<Compact> parts;
    BallSplitter splitter(cert.compact, pow2(-n));
    for (size_t idx = 0; idx < zeta.size(); ++idx) {
        auto split = splitter.split(zeta.points[idx]);
        if (split.tag == SplitResult::Tag::Miss) continue;
        Compact piece = *split.piece;
        auto [psup, pinf] = sup_inf(pi(piece));
        CReal osc = psup - pinf;
        if (approx_compare(osc, e, 2 * e) == Verdict::GreaterThanA) {
            parts.push_back(std::move(piece));
        } else {
            // anchor on a net representative of the piece: it sits within
            // 2^-(n+2) of a piece member, so 31 * 2^-(n+1) total stays
            // strictly under the 2^(4-n) displacement bound
            const Point& anchor = piece.net(n + 2).points[0];
            Point low = find_low_member(f, k, sup, e, anchor, Rat(31) * pow2(-n - 1), budget);
            parts.push_back(singleton_compact(k.space(), low));
        }
    }
    if (parts.empty())
        throw ClassViolation("refine_step: every ball of the net came back empty");

    Compact out = compact_thin_union(k.space(), std::move(parts));

    CReal moved = compact_dist(cert.compact, out);
    if (approx_compare(moved, Rat(7, 8) * pow2(5 - n), pow2(5 - n)) == Verdict::GreaterThanA)
        throw ClassViolation("refine_step: refinement moved the compact beyond 2^(5-n)");

    return ClassCertificate{n + 1, e, std::move(out), cert.provenance + "|refine"};
}

Rat peak_impl(const EffectiveMap& f, const ImageOracle& pi, const Compact& k, const Rat& eps,
              int budget) {
    Compact img = pi(k);
    auto [sup, inf] = sup_inf(img);
    CReal osc = sup - inf;
    if (approx_compare(osc, eps, 2 * eps) == Verdict::LessThanB) return Rat(1);

    // largest m certified to satisfy rho(K, {z}) < 2^(3-m)
    Point z = k.net(0).points[0];
    CReal rad = compact_dist(k, singleton_compact(k.space(), z));
    int m = 0;
    bool have_m = false;
    for (int cand = -32; cand <= 32; ++cand) {
        if (approx_compare(rad, Rat(3, 4) * pow2(3 - cand), pow2(3 - cand)) ==
            Verdict::LessThanB) {
            m = cand;
            have_m = true;
        } else if (have_m) {
            break;
        }
    }
    if (!have_m) throw BudgetExceeded("peak_modulus: no diameter bound certified");

    ClassCertificate cert{m, eps, k, "base"};
    for (int step = 1; step <= budget; ++step) {
        // witness list: members of K avoiding the peak, close to the stage
        // compact (the realization of the dif:1:3 consequence)
        int q = m + step - 4;
        const FiniteList& net = cert.compact.net(q);
        std::vector<Point> lows;
        lows.reserve(net.size());
        for (size_t idx = 0; idx < net.size(); ++idx) {
            // net points sit within 2^-q of the stage compact, so a low
            // member within 5 * 2^-q of the net point keeps the list within
            // 6 * 2^-q < 2^(7-m-step) of the stage compact both ways
            lows.push_back(find_low_member(f, k, sup, eps, net.points[idx],
                                           Rat(5) * pow2(4 - m - step), budget));
        }
        Compact witness = compact_of_list(FiniteList(k.space(), std::move(lows)));

        // the bounded search standing in for the continuity argument: accept
        // the first stage where the image of the stage compact and the image
        // of the witness list are certified within eps/2
        CReal d = compact_dist(pi(cert.compact), pi(witness));
        if (approx_compare(d, eps / 4, eps / 2) == Verdict::LessThanB)
            return pow2(1 - m - step);

        cert = refine_impl(f, pi, k, sup, cert, budget);
    }
    throw BudgetExceeded("peak_modulus: image convergence not certified within budget");
}

Rat umr_level(const EffectiveMap& f, const ImageOracle& pi, const Compact& k, const Rat& eps,
              int budget, int depth_cap, const TraceSink& trace, int depth) {
    Compact img = pi(k);
    auto [sup, inf] = sup_inf(img);
    CReal osc = sup - inf;
    int n = std::min(least_level(osc, eps), depth_cap);
    if (n == 0) {
        if (trace) trace(TraceNode{depth, 0, 0, 0, Rat(0)});
        return Rat(1);
    }

    Rat kap = std::min(peak_impl(f, pi, k, eps / 4, budget),
                       peak_impl(f, pi, k, eps / 30, budget));
    int p = min_n_pow2_leq(kap / 16);
    const FiniteList& net = k.net(p);
    Rat delta = kap / 4;
    size_t recursed = 0;
    BallSplitter splitter(k, kap / 2);
    for (size_t idx = 0; idx < net.size(); ++idx) {
        Point z = select_net_point(k, p, idx);
        auto split = splitter.split(z);
        if (split.tag == SplitResult::Tag::Miss)
            throw ClassViolation("uniform_modulus_real: ball around a member came back empty");
        CReal gap = sup - f.apply(z).coords[0];
        if (approx_compare(gap, eps / 12, eps / 8) == Verdict::GreaterThanA) {
            // the piece provably avoids the peak, so its oscillation dropped
            // a level; pieces near the peak are already covered by kap
            ++recursed;
            delta = std::min(delta, umr_level(f, pi, *split.piece, eps, budget, n - 1, trace,
                                              depth + 1));
        }
    }
    if (trace) trace(TraceNode{depth, n, net.size(), recursed, kap});
    return delta;
}

}  // namespace

ClassCertificate refine_step(const EffectiveMap& f, const ImageOracle& pi_f, const Compact& k,
                             const ClassCertificate& cert, int budget) {
    if (cert.eps <= 0) throw ValidationError("refine_step: eps must be positive");
    check_real_valued(f, "refine_step");
    CReal sup = sup_inf(pi_f(k)).first;
    return refine_impl(f, pi_f, k, sup, cert, budget);
}

Rat peak_modulus(const EffectiveMap& f, const ImageOracle& pi_f, const Compact& k,
                 const Rat& eps, int budget) {
    if (eps <= 0) throw ValidationError("peak_modulus: eps must be positive");
    check_real_valued(f, "peak_modulus");
    return peak_impl(f, memoize_oracle(pi_f), k, eps, budget);
}

Rat uniform_modulus_real(const EffectiveMap& f, const ImageOracle& pi_f, const Compact& k,
                         const Rat& eps, int budget, const TraceSink& trace) {
    if (eps <= 0) throw ValidationError("uniform_modulus_real: eps must be positive");
    check_real_valued(f, "uniform_modulus_real");
    if (k.space() != f.domain)
        throw SpaceMismatch("uniform_modulus_real: compact not in the domain");
    return umr_level(f, memoize_oracle(pi_f), k, eps, budget, INT_MAX, trace, 0);
}

Rat uniform_modulus(const EffectiveMap& f, const ImageOracle& pi_f, const Compact& k,
                    const Rat& eps, int budget, const TraceSink& trace) {
    if (eps <= 0) throw ValidationError("uniform_modulus: eps must be positive");
    if (k.space() != f.domain) throw SpaceMismatch("uniform_modulus: compact not in the domain");
    // real-valued maps need no net of distance functionals: the reduction
    // would compose with phi(y) = |y - anchor|, which only weakens eps to
    // eps/3, so run the real-valued extraction directly
    if (f.codomain->dim() == 1)
        return umr_level(f, memoize_oracle(pi_f), k, eps, budget, INT_MAX, trace, 0);
    ImageOracle pi = memoize_oracle(pi_f);
    Compact img = pi(k);

    // eps/3-net of the image: net at eps/12, thinned to eps/6 separation so
    // the per-anchor recursion stays proportional to the image size, not the
    // net size
    int p = min_n_pow2_leq(eps / 12);
    int q = min_n_pow2_leq(eps / 60);
    const FiniteList& raw = img.net(p);
    std::vector<Point> anchors;
    for (const auto& cand : raw.points) {
        bool fresh = true;
        for (const auto& kept : anchors) {
            if (f.codomain->dist_approx(cand, kept, q) <= eps / 6) {
                fresh = false;
                break;
            }
        }
        if (fresh) anchors.push_back(cand);
    }

    Rat delta(1);
    for (const auto& anchor : anchors) {
        EffectiveMap phi = distance_functional(f.codomain, anchor);
        EffectiveMap composed(f.domain, real_line(),
                              [f, phi](const Point& x) { return phi.apply(f.apply(x)); });
        ImageOracle pi_composed = derive_image_oracle(phi, pi);
        delta = std::min(delta, umr_level(composed, memoize_oracle(pi_composed), k, eps / 3,
                                          budget, INT_MAX, trace, 0));
    }
    return delta;
}

}  // namespace compacta
