// SPDX-License-Identifier: Apache-2.0

#include "compacta/errors.hpp"
#include "compacta/maps.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace compacta;
using testutil::random_rational_list;
using testutil::to_list;

namespace {

Rat rabs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

EffectiveMap identity_map(const SpacePtr& space) {
    return EffectiveMap(space, space, [](const Point& p) { return p; });
}

EffectiveMap constant_map(const SpacePtr& dom, const SpacePtr& cod, const Point& c) {
    return EffectiveMap(dom, cod, [c](const Point&) { return c; });
}

// x |-> 2x on the real line, modulus eps/2
EffectiveMap doubling_map() {
    auto r = real_line();
    return EffectiveMap(r, r, [](const Point& p) {
        Point out;
        out.coords.push_back(scale(Rat(2), p.coords[0]));
        return out;
    });
}

EffectiveMap square_map() {
    auto r = real_line();
    return EffectiveMap(r, r, [](const Point& p) {
        Point out;
        out.coords.push_back(square(p.coords[0]));
        return out;
    });
}

}  // namespace

TEST_CASE("square helper stays within tolerance") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        Rat q = testutil::random_dyadic(rng);
        CReal s = square(CReal::of_rat(q));
        for (int n : {-2, 0, 6, 16}) CHECK(rabs(s.approx(n) - q * q) <= pow2(-n));
    }
}

TEST_CASE("image of the identity is the same compact") {
    std::mt19937_64 rng(73);
    auto r = real_line();
    for (int trial = 0; trial < 20; ++trial) {
        auto za = random_rational_list(rng, 1);
        Compact k = compact_of_list(to_list(r, za));
        Compact img = image_compact(identity_map(r), identity_modulus(), k);
        CHECK(rabs(compact_dist(img, k).approx(12)) <= pow2(-12));
    }
}

TEST_CASE("image of a constant map is the singleton") {
    auto r = real_line();
    Compact k = compact_of_list(to_list(r, {{Rat(0)}, {Rat(1)}, {Rat(-2)}}));
    Point c = rational_point(Rat(5, 3));
    auto mu = [](const Compact&, const Rat&) { return Rat(1); };
    Compact img = image_compact(constant_map(r, r, c), mu, k);
    CHECK(rabs(compact_dist(img, singleton_compact(r, c)).approx(14)) <= pow2(-14));
}

TEST_CASE("doubling the unit grid doubles sup and keeps inf") {
    auto r = real_line();
    Compact k = grid_compact(r, {{Rat(0), Rat(1)}}, Rat(1, 64));
    auto mu = [](const Compact&, const Rat& eps) { return eps / 2; };
    Compact img = image_compact(doubling_map(), mu, k);
    auto [sup, inf] = sup_inf(img);
    CHECK(rabs(sup.approx(12) - 2) <= Rat(1, 32) + pow2(-12));
    CHECK(rabs(inf.approx(12)) <= Rat(1, 32) + pow2(-12));
}

TEST_CASE("a modulus returning nonpositive delta is rejected") {
    auto r = real_line();
    Compact k = compact_of_list(to_list(r, {{Rat(0)}}));
    auto bad = [](const Compact&, const Rat&) { return Rat(0); };
    Compact img = image_compact(identity_map(r), bad, k);
    CHECK_THROWS_AS(img.net(3), ValidationError);
}

TEST_CASE("image members pass is_member on the image compact") {
    std::mt19937_64 rng(79);
    auto r = real_line();
    auto mu = [](const Compact&, const Rat& eps) { return eps / 2; };
    for (int trial = 0; trial < 20; ++trial) {
        auto za = random_rational_list(rng, 1);
        Compact k = compact_of_list(to_list(r, za));
        Compact img = image_compact(doubling_map(), mu, k);
        for (const auto& p : za) {
            CHECK(is_member(rational_point(Rat(2) * p[0]), img, pow2(-16)) ==
                  Verdict::LessThanB);
        }
    }
}

TEST_CASE("image oracle is extensional on equal compacts") {
    auto r = real_line();
    auto mu = [](const Compact&, const Rat& eps) { return eps / 2; };
    ImageOracle pi = make_image_oracle(square_map(), mu);
    Compact a = grid_compact(r, {{Rat(0), Rat(1)}}, Rat(1, 32));
    Compact b = compact_of_list(grid_net(r, {{Rat(0), Rat(1)}}, Rat(1, 32)));
    CHECK(rabs(compact_dist(pi(a), pi(b)).approx(10)) <= pow2(-10));
}

TEST_CASE("find_point_near_value on the identity") {
    auto r = real_line();
    Compact k = grid_compact(r, {{Rat(0), Rat(1)}}, Rat(1, 64));
    Point x = find_point_near_value(identity_map(r), k, rational_point(Rat(1, 2)), Rat(1, 10));
    CHECK(rabs(x.coords[0].approx(12) - Rat(1, 2)) <= Rat(1, 10) + pow2(-12));
    CHECK(is_member(x, k, pow2(-12)) == Verdict::LessThanB);
}

TEST_CASE("find_point_near_value accepts any member under a constant map") {
    auto r = real_line();
    Compact k = compact_of_list(to_list(r, {{Rat(0)}, {Rat(7)}}));
    Point c = rational_point(Rat(-1));
    Point x = find_point_near_value(constant_map(r, r, c), k, c, Rat(1, 4));
    CHECK(is_member(x, k, pow2(-12)) == Verdict::LessThanB);
}

TEST_CASE("find_point_near_value exhausts the budget on an unreachable value") {
    auto r = real_line();
    Compact k = grid_compact(r, {{Rat(0), Rat(1)}}, Rat(1, 16));
    CHECK_THROWS_AS(
        find_point_near_value(identity_map(r), k, rational_point(Rat(10)), Rat(1, 10), 6),
        BudgetExceeded);
}

TEST_CASE("distance functional values and reverse triangle") {
    auto r = real_line();
    EffectiveMap phi = distance_functional(r, rational_point(Rat(0)));
    CHECK(rabs(phi.apply(rational_point(Rat(3))).coords[0].approx(12) - 3) <= pow2(-12));
    CHECK(rabs(phi.apply(rational_point(Rat(0))).coords[0].approx(12)) <= pow2(-12));

    auto r2 = real_box_space(2);
    EffectiveMap phi2 = distance_functional(r2, rational_point(std::vector<Rat>{Rat(0), Rat(0)}));
    CHECK(rabs(phi2.apply(rational_point(std::vector<Rat>{Rat(1), Rat(1, 2)})).coords[0].approx(12) - 1) <=
          pow2(-12));

    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 60; ++trial) {
        Rat a = testutil::random_dyadic(rng), b = testutil::random_dyadic(rng);
        Rat pa = phi.apply(rational_point(a)).coords[0].approx(14);
        Rat pb = phi.apply(rational_point(b)).coords[0].approx(14);
        CHECK(rabs(pa - pb) <= rabs(a - b) + 2 * pow2(-14));
    }
}

TEST_CASE("derived oracle composes a distance functional with an image oracle") {
    auto r = real_line();
    auto mu = [](const Compact&, const Rat& eps) { return eps; };
    ImageOracle pi_id = make_image_oracle(identity_map(r), mu);
    EffectiveMap phi = distance_functional(r, rational_point(Rat(0)));
    ImageOracle pi = derive_image_oracle(phi, pi_id);

    Compact k = grid_compact(r, {{Rat(0), Rat(1)}}, Rat(1, 32));
    auto [sup, inf] = sup_inf(pi(k));
    CHECK(rabs(sup.approx(10) - 1) <= Rat(1, 16) + pow2(-10));
    CHECK(rabs(inf.approx(10)) <= Rat(1, 16) + pow2(-10));

    Compact single = singleton_compact(r, rational_point(Rat(5, 7)));
    EffectiveMap phi_c = distance_functional(r, rational_point(Rat(5, 7)));
    auto [s2, i2] = sup_inf(derive_image_oracle(phi_c, pi_id)(single));
    CHECK(rabs(s2.approx(14)) <= pow2(-13));
}
