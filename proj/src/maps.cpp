// SPDX-License-Identifier: Apache-2.0

#include "compacta/maps.hpp"

#include "compacta/errors.hpp"

namespace compacta {

EffectiveMap::EffectiveMap(SpacePtr dom, SpacePtr cod, std::function<Point(const Point&)> fn)
    : domain(std::move(dom)), codomain(std::move(cod)), apply(std::move(fn)) {
    if (!domain || !codomain) throw ValidationError("EffectiveMap: null space");
    if (!apply) throw ValidationError("EffectiveMap: null oracle");
}

UniformModulus identity_modulus() {
    return [](const Compact&, const Rat& eps) { return eps; };
}

Compact image_compact(const EffectiveMap& f, const UniformModulus& mu, const Compact& k) {
    if (k.space() != f.domain) throw SpaceMismatch("image_compact: compact not in the domain");
    EffectiveMap f_copy = f;
    UniformModulus mu_copy = mu;
    Compact dom = k;
    return Compact(f.codomain, [f_copy, mu_copy, dom](int n) {
        Rat delta = mu_copy(dom, pow2(-(n + 1)));
        if (delta <= 0) throw ValidationError("image_compact: modulus returned delta <= 0");
        int m = min_n_pow2_leq(delta / 2);
        const auto& src = dom.net(m).points;
        std::vector<Point> out;
        out.reserve(src.size());
        for (const auto& p : src) out.push_back(f_copy.apply(p));
        return FiniteList(f_copy.codomain, std::move(out));
    }, k.member_nets());
}

ImageOracle make_image_oracle(const EffectiveMap& f, const UniformModulus& mu) {
    EffectiveMap f_copy = f;
    UniformModulus mu_copy = mu;
    return [f_copy, mu_copy](const Compact& k) { return image_compact(f_copy, mu_copy, k); };
}

Point find_point_near_value(const EffectiveMap& f, const Compact& k, const Point& y,
                            const Rat& eps, int budget) {
    if (eps <= 0) throw ValidationError("find_point_near_value: eps must be positive");
    if (k.space() != f.domain)
        throw SpaceMismatch("find_point_near_value: compact not in the domain");
    for (int j = 1; j <= budget; ++j) {
        const FiniteList& net = k.net(j);
        for (size_t idx = 0; idx < net.size(); ++idx) {
            Point x = select_net_point(k, j, idx);
            CReal d = f.codomain->dist(f.apply(x), y);
            if (approx_compare(d, eps * Rat(3, 4), eps) == Verdict::LessThanB) return x;
        }
    }
    throw BudgetExceeded("find_point_near_value: no candidate verified within budget");
}

EffectiveMap distance_functional(const SpacePtr& space, const Point& anchor) {
    SpacePtr sp = space;
    Point a = anchor;
    return EffectiveMap(space, real_line(), [sp, a](const Point& y) {
        Point out;
        out.coords.push_back(sp->dist(y, a));
        return out;
    });
}

ImageOracle derive_image_oracle(const EffectiveMap& phi, const ImageOracle& pi_f) {
    EffectiveMap phi_copy = phi;
    ImageOracle pi_copy = pi_f;
    return [phi_copy, pi_copy](const Compact& k) {
        return image_compact(phi_copy, identity_modulus(), pi_copy(k));
    };
}

}  // namespace compacta
