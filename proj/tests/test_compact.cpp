// SPDX-License-Identifier: Apache-2.0

#include "compacta/compact.hpp"
#include "compacta/errors.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace compacta;
using testutil::brute_hausdorff;
using testutil::random_rational_list;
using testutil::to_list;

namespace {
Rat rabs(const Rat& q) { return q < 0 ? Rat(-q) : q; }
}

TEST_CASE("compact_dist agrees with the exact oracle on embedded lists") {
    std::mt19937_64 rng(31);
    auto r = real_line();
    for (int trial = 0; trial < 80; ++trial) {
        auto za = random_rational_list(rng, 1);
        auto ea = random_rational_list(rng, 1);
        Rat exact = brute_hausdorff(za, ea);
        Compact ka = compact_of_list(to_list(r, za));
        Compact kb = compact_of_list(to_list(r, ea));
        int n = 5 + static_cast<int>(rng() % 12);
        CHECK(rabs(compact_dist(ka, kb).approx(n) - exact) <= pow2(-n));
    }
}

TEST_CASE("grid_compact is the same point of the completion as the full grid") {
    auto r = real_line();
    std::vector<std::pair<Rat, Rat>> box{{Rat(0), Rat(1)}};
    Compact g = grid_compact(r, box, Rat(1, 64));
    Compact full = compact_of_list(grid_net(r, box, Rat(1, 64)));
    CHECK(rabs(compact_dist(g, full).approx(14)) <= pow2(-14));
    // coarse nets are genuinely thinned
    CHECK(g.net(0).size() < full.net(10).size());
    // every net still satisfies the 2^-n contract against the full grid
    std::vector<std::vector<Rat>> grid_pts;
    for (const auto& p : full.net(0).points) grid_pts.push_back({p.coords[0].approx(40)});
    for (int n = 0; n <= 8; ++n) {
        std::vector<std::vector<Rat>> net_pts;
        for (const auto& p : g.net(n).points) net_pts.push_back({p.coords[0].approx(40)});
        CHECK(brute_hausdorff(net_pts, grid_pts) <= pow2(-n));
    }
}

TEST_CASE("union nets concatenate and the union is an upper bound") {
    std::mt19937_64 rng(37);
    auto r2 = real_box_space(2);
    for (int trial = 0; trial < 40; ++trial) {
        auto za = random_rational_list(rng, 2);
        auto ea = random_rational_list(rng, 2);
        Compact ka = compact_of_list(to_list(r2, za));
        Compact kb = compact_of_list(to_list(r2, ea));
        Compact u = compact_union(ka, kb);
        CHECK(u.net(4).size() == ka.net(4).size() + kb.net(4).size());
        CHECK(majorizes(ka, u, Rat(1, 128)) == Verdict::LessThanB);
        CHECK(majorizes(kb, u, Rat(1, 128)) == Verdict::LessThanB);
        auto c = za;
        c.insert(c.end(), ea.begin(), ea.end());
        int n = 10;
        CHECK(rabs(compact_dist(u, compact_of_list(to_list(r2, c))).approx(n)) <= pow2(-n));
    }
}

TEST_CASE("majorizes affirms subsets and refutes far outliers") {
    auto r = real_line();
    Compact k = compact_of_list(to_list(r, {{Rat(0)}, {Rat(1)}, {Rat(1, 2)}}));
    Compact sub = compact_of_list(to_list(r, {{Rat(0)}, {Rat(1)}}));
    CHECK(majorizes(sub, k, Rat(1, 64)) == Verdict::LessThanB);
    Compact far = compact_of_list(to_list(r, {{Rat(3)}}));
    CHECK(majorizes(far, k, Rat(1, 64)) == Verdict::GreaterThanA);
    // refuting tolerance below the actual excess, affirming above it
    Compact near = compact_of_list(to_list(r, {{Rat(9, 8)}}));
    CHECK(majorizes(near, k, Rat(1, 64)) == Verdict::GreaterThanA);
    CHECK(majorizes(near, k, Rat(1, 2)) == Verdict::LessThanB);
}

TEST_CASE("is_member tracks incidence up to tolerance") {
    auto r = real_line();
    Compact k = compact_of_list(to_list(r, {{Rat(0)}, {Rat(1)}}));
    CHECK(is_member(rational_point(Rat(1)), k, Rat(1, 64)) == Verdict::LessThanB);
    CHECK(is_member(rational_point(Rat(1, 2)), k, Rat(1, 64)) == Verdict::GreaterThanA);
    CHECK(is_member(rational_point(Rat(1, 2)), k, Rat(2)) == Verdict::LessThanB);
    CHECK_THROWS_AS(is_member(rational_point(std::vector<Rat>{Rat(0), Rat(0)}), k, Rat(1, 4)), SpaceMismatch);
}

TEST_CASE("nearest_index returns a verified witness") {
    std::mt19937_64 rng(43);
    auto r2 = real_box_space(2);
    for (int trial = 0; trial < 60; ++trial) {
        auto za = random_rational_list(rng, 2);
        Compact k = compact_of_list(to_list(r2, za));
        size_t pick = rng() % za.size();
        Point x = rational_point(za[pick]);
        // zeta = the list itself, so rho(K, zeta) = 0 < eps for any eps
        Rat eps(1, 1 + static_cast<long>(rng() % 16));
        size_t idx = nearest_index(x, k, to_list(r2, za), eps);
        REQUIRE(idx < za.size());
        CHECK(testutil::brute_dist(za[pick], za[idx]) < eps);
    }
}

TEST_CASE("nearest_index exhausts its budget when the precondition fails") {
    auto r = real_line();
    Compact k = compact_of_list(to_list(r, {{Rat(0)}}));
    FiniteList zeta = to_list(r, {{Rat(10)}});
    CHECK_THROWS_AS(nearest_index(rational_point(Rat(0)), k, zeta, Rat(1, 2), 8),
                    BudgetExceeded);
}

TEST_CASE("select_point lands in the member set near the chosen anchor") {
    std::mt19937_64 rng(47);
    auto r = real_line();
    for (int trial = 0; trial < 40; ++trial) {
        auto za = random_rational_list(rng, 1);
        Compact k = compact_of_list(to_list(r, za));
        size_t idx = rng() % za.size();
        Rat eps(1, 4);
        Point y = select_point(k, to_list(r, za), idx, eps);
        // y is a member: within every net's reach
        CHECK(is_member(y, k, Rat(1, 256)) == Verdict::LessThanB);
        CHECK(r->dist(y, rational_point(za[idx])).approx(12) <= eps + pow2(-12));
    }
}

TEST_CASE("select_point works with an anchor list coarser than the compact") {
    auto r = real_line();
    std::vector<std::pair<Rat, Rat>> box{{Rat(0), Rat(1)}};
    Compact g = grid_compact(r, box, Rat(1, 64));
    FiniteList zeta = grid_net(r, box, Rat(1, 4));
    // rho(K, zeta) <= 1/8 < 1/4
    Point y = select_point(g, zeta, 2, Rat(1, 4));
    CHECK(is_member(y, g, Rat(1, 256)) == Verdict::LessThanB);
    CHECK(r->dist(y, rational_point(Rat(1, 2))).approx(12) <= Rat(1, 4) + pow2(-12));
}

TEST_CASE("component_select names a component owning a nearby member") {
    std::mt19937_64 rng(53);
    auto r = real_line();
    for (int trial = 0; trial < 40; ++trial) {
        auto za = random_rational_list(rng, 1);
        auto ea = random_rational_list(rng, 1);
        Compact k1 = compact_of_list(to_list(r, za));
        Compact k2 = compact_of_list(to_list(r, ea));
        bool from_first = rng() % 2 == 0;
        const auto& src = from_first ? za : ea;
        Point x = rational_point(src[rng() % src.size()]);
        Rat eps(1, 8);
        auto [tag, y] = component_select(x, k1, k2, eps);
        const Compact& owner = tag == ComponentTag::First ? k1 : k2;
        CHECK(is_member(y, owner, Rat(1, 256)) == Verdict::LessThanB);
        CHECK(r->dist(x, y).approx(12) <= eps + pow2(-12));
    }
}

TEST_CASE("sup_inf is exact on embedded rational lists") {
    std::mt19937_64 rng(59);
    auto r = real_line();
    for (int trial = 0; trial < 60; ++trial) {
        auto za = random_rational_list(rng, 1);
        Rat lo = za[0][0], hi = za[0][0];
        for (const auto& p : za) {
            if (p[0] < lo) lo = p[0];
            if (p[0] > hi) hi = p[0];
        }
        Compact k = compact_of_list(to_list(r, za));
        auto [sup, inf] = sup_inf(k);
        int n = 8 + static_cast<int>(rng() % 10);
        CHECK(rabs(sup.approx(n) - hi) <= pow2(-n));
        CHECK(rabs(inf.approx(n) - lo) <= pow2(-n));
    }
    CHECK_THROWS_AS(sup_inf(compact_of_list(to_list(real_box_space(2), {{Rat(0), Rat(0)}}))),
                    SpaceMismatch);
}

TEST_CASE("sup and inf are members and bracket the compact") {
    auto r = real_line();
    std::vector<std::pair<Rat, Rat>> box{{Rat(-1, 4), Rat(5, 8)}};
    Compact g = grid_compact(r, box, Rat(1, 32));
    auto [sup, inf] = sup_inf(g);
    CHECK(rabs(sup.approx(14) - Rat(5, 8)) <= pow2(-14));
    CHECK(rabs(inf.approx(14) + Rat(1, 4)) <= pow2(-14));
}
