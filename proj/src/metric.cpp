// SPDX-License-Identifier: Apache-2.0

#include "compacta/metric.hpp"

#include "compacta/errors.hpp"

#include <map>
#include <mutex>

namespace compacta {

CReal MetricSpace::dist(const Point& p, const Point& q) const {
    if (static_cast<int>(p.coords.size()) != dim_ || static_cast<int>(q.coords.size()) != dim_)
        throw SpaceMismatch("dist: point dimension does not match space " + name_);
    bool exact = true;
    for (int i = 0; i < dim_ && exact; ++i)
        exact = p.coords[i].exact_value() && q.coords[i].exact_value();
    if (exact) {
        Rat best(0);
        for (int i = 0; i < dim_; ++i) {
            Rat v = *p.coords[i].exact_value() - *q.coords[i].exact_value();
            if (v < 0) v = -v;
            if (v > best) best = v;
        }
        return CReal::of_rat(std::move(best));
    }
    if (dim_ == 1) {
        CReal a = p.coords[0], b = q.coords[0];
        return CReal::from_oracle([a, b](int n) {
            Rat v = a.approx(n + 1) - b.approx(n + 1);
            return v < 0 ? Rat(-v) : v;
        });
    }
    std::vector<CReal> a = p.coords, b = q.coords;
    return CReal::from_oracle([a, b](int n) {
        Rat best(0);
        for (size_t i = 0; i < a.size(); ++i) {
            Rat v = a[i].approx(n + 1) - b[i].approx(n + 1);
            if (v < 0) v = -v;
            if (v > best) best = v;
        }
        return best;
    });
}

Rat MetricSpace::dist_approx(const Point& p, const Point& q, int n) const {
    if (static_cast<int>(p.coords.size()) != dim_ || static_cast<int>(q.coords.size()) != dim_)
        throw SpaceMismatch("dist_approx: point dimension does not match space " + name_);
    bool exact = true;
    for (int i = 0; i < dim_ && exact; ++i)
        exact = p.coords[i].exact_value() && q.coords[i].exact_value();
    Rat best(0);
    if (exact) {
        for (int i = 0; i < dim_; ++i) {
            Rat v = *p.coords[i].exact_value() - *q.coords[i].exact_value();
            if (v < 0) v = -v;
            if (v > best) best = v;
        }
        return best;
    }
    // mirrors dist(): oracle at n+2 queries coordinates at n+3, then rounds
    for (int i = 0; i < dim_; ++i) {
        Rat v = p.coords[i].approx(n + 3) - q.coords[i].approx(n + 3);
        if (v < 0) v = -v;
        if (v > best) best = v;
    }
    return round_dyadic(best, n + 2);
}

Point MetricSpace::limit(std::function<Point(int)> chain) const {
    struct Memo {
        std::function<Point(int)> fn;
        std::map<int, Point> cache;
        std::mutex mu;
    };
    auto memo = std::make_shared<Memo>();
    memo->fn = std::move(chain);
    auto at = [memo](int k) -> Point {
        std::lock_guard<std::mutex> lock(memo->mu);
        auto it = memo->cache.find(k);
        if (it != memo->cache.end()) return it->second;
        return memo->cache.emplace(k, memo->fn(k)).first->second;
    };
    Point out;
    out.coords.reserve(dim_);
    for (int j = 0; j < dim_; ++j) {
        out.coords.push_back(CReal::from_oracle([at, j](int n) {
            int k = n + 1 < 1 ? 1 : n + 1;
            return at(k).coords[j].approx(n + 1);
        }));
    }
    return out;
}

SpacePtr real_line() {
    static SpacePtr instance = std::make_shared<MetricSpace>("R", 1);
    return instance;
}

SpacePtr real_box_space(int d) {
    if (d < 1) throw ValidationError("real_box_space: dimension must be >= 1");
    static std::map<int, SpacePtr> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
    auto sp = std::make_shared<MetricSpace>("R^" + std::to_string(d), d);
    return cache.emplace(d, std::move(sp)).first->second;
}

Point rational_point(const std::vector<Rat>& coords) {
    Point p;
    p.coords.reserve(coords.size());
    for (const auto& c : coords) p.coords.push_back(CReal::of_rat(c));
    return p;
}

Point rational_point(const Rat& x) { return rational_point(std::vector<Rat>{x}); }

}  // namespace compacta
