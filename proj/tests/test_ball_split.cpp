// SPDX-License-Identifier: Apache-2.0

#include "compacta/compact.hpp"
#include "compacta/errors.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace compacta;
using testutil::brute_dist;
using testutil::random_rational_list;
using testutil::to_list;

namespace {

Rat rabs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// exact distances from a rational center to a rational list
Rat min_dist(const std::vector<Rat>& center, const std::vector<std::vector<Rat>>& pts) {
    Rat best = brute_dist(center, pts[0]);
    for (const auto& p : pts) best = std::min(best, brute_dist(center, p));
    return best;
}

}  // namespace

TEST_CASE("ball_split rejects a nonpositive radius") {
    auto r = real_line();
    Compact k = compact_of_list(to_list(r, {{Rat(0)}}));
    CHECK_THROWS_AS(ball_split(k, rational_point(Rat(0)), Rat(0)), ValidationError);
}

TEST_CASE("clear miss and clear hit") {
    auto r = real_line();
    Compact k = compact_of_list(to_list(r, {{Rat(0)}, {Rat(4)}}));
    auto miss = ball_split(k, rational_point(Rat(2)), Rat(1, 2));
    CHECK(miss.tag == SplitResult::Tag::Miss);

    auto hit = ball_split(k, rational_point(Rat(1, 8)), Rat(1, 2));
    REQUIRE(hit.tag == SplitResult::Tag::Piece);
    const Compact& piece = *hit.piece;
    CHECK(majorizes(piece, k, Rat(1, 256)) == Verdict::LessThanB);
    // 0 is inside the ball, 4 is far outside the doubled ball
    CHECK(is_member(rational_point(Rat(0)), piece, Rat(1, 256)) == Verdict::LessThanB);
    CHECK(is_member(rational_point(Rat(4)), piece, Rat(1, 2)) == Verdict::GreaterThanA);
}

TEST_CASE("postconditions on random list compacts") {
    std::mt19937_64 rng(61);
    for (int dim : {1, 2}) {
        auto space = dim == 1 ? real_line() : real_box_space(2);
        for (int trial = 0; trial < 60; ++trial) {
            auto pts = random_rational_list(rng, dim);
            std::vector<Rat> center;
            for (int i = 0; i < dim; ++i) center.push_back(testutil::random_dyadic(rng));
            Rat eps = Rat(1, 1L << (rng() % 3));
            Compact k = compact_of_list(to_list(space, pts));
            auto res = ball_split(k, rational_point(center), eps);

            if (res.tag == SplitResult::Tag::Miss) {
                // no member may lie in the open ball
                CHECK(min_dist(center, pts) >= eps);
                continue;
            }
            const Compact& piece = *res.piece;
            // the piece sits below K
            CHECK(majorizes(piece, k, Rat(1, 1024)) == Verdict::LessThanB);
            // every member of K inside the ball belongs to the piece
            for (const auto& p : pts) {
                if (brute_dist(center, p) < eps)
                    CHECK(is_member(rational_point(p), piece, Rat(1, 1024)) ==
                          Verdict::LessThanB);
            }
            // the piece stays inside the doubled ball: nets consist of list
            // points, so the exact oracle applies
            for (int n : {0, 3, 8}) {
                for (const auto& q : piece.net(n).points) {
                    std::vector<Rat> qc;
                    for (const auto& c : q.coords) qc.push_back(c.approx(40));
                    CHECK(brute_dist(center, qc) <= 2 * eps);
                }
            }
        }
    }
}

TEST_CASE("piece nets are a regular Cauchy sequence") {
    std::mt19937_64 rng(67);
    auto r = real_line();
    for (int trial = 0; trial < 25; ++trial) {
        auto pts = random_rational_list(rng, 1);
        Rat center = testutil::random_dyadic(rng);
        Compact k = compact_of_list(to_list(r, pts));
        auto res = ball_split(k, rational_point(center), Rat(1, 2));
        if (res.tag != SplitResult::Tag::Piece) continue;
        const Compact& piece = *res.piece;
        for (int n = 0; n <= 6; n += 2) {
            for (int m = n; m <= 8; m += 3) {
                Rat d = list_hausdorff(piece.net(n), piece.net(m)).approx(16);
                CHECK(d <= pow2(-n) + pow2(-m) + pow2(-16));
            }
        }
    }
}

TEST_CASE("splitting a grid keeps the ball slice") {
    auto r = real_line();
    std::vector<std::pair<Rat, Rat>> box{{Rat(0), Rat(1)}};
    Compact g = grid_compact(r, box, Rat(1, 64));
    Rat eps(1, 8);
    auto res = ball_split(g, rational_point(Rat(1, 2)), eps);
    REQUIRE(res.tag == SplitResult::Tag::Piece);
    const Compact& piece = *res.piece;
    CHECK(majorizes(piece, g, Rat(1, 1024)) == Verdict::LessThanB);
    auto [sup, inf] = sup_inf(piece);
    // members inside (3/8, 5/8) survive, nothing escapes (1/4, 3/4)
    CHECK(sup.approx(12) >= Rat(5, 8) - Rat(1, 64) - pow2(-12));
    CHECK(sup.approx(12) <= Rat(3, 4) + pow2(-12));
    CHECK(inf.approx(12) <= Rat(3, 8) + Rat(1, 64) + pow2(-12));
    CHECK(inf.approx(12) >= Rat(1, 4) - pow2(-12));

    auto far = ball_split(g, rational_point(Rat(3)), eps);
    CHECK(far.tag == SplitResult::Tag::Miss);
}
