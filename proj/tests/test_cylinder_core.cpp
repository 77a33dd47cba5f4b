#include <doctest.h>

#include "nof/cylinder_core.hpp"
#include "nof/function_core.hpp"
#include "oracles.hpp"

using namespace nof;

TEST_CASE("rect_contains is plain membership with range checking") {
    const Rectangle r = Rectangle::from_masks(0b01, 0b01, 2);
    CHECK(rect_contains(r, {0, 0}));
    CHECK_FALSE(rect_contains(r, {0, 1}));
    CHECK(rect_contains(Rectangle::from_masks(0b11, 0b10, 2), {1, 1}));
    CHECK_THROWS_AS(rect_contains(r, {2, 0}), RangeError);
    CHECK_THROWS_AS(rect_contains(r, {0, -1}), RangeError);
}

TEST_CASE("mono_value_of distinguishes the three outcomes") {
    const BaseFunction constant = oracle::grid(2, 3, {1, 1, 1, 1});
    const EntrySet full = EntrySet::full(2);

    const MonoCheck mono = mono_value_of(constant, full, Rectangle::full(2));
    CHECK(mono.kind == MonoCheck::Kind::Monochromatic);
    CHECK(mono.value == 1);

    const MonoCheck clash =
        mono_value_of(gen_latin(2), full, Rectangle::from_masks(0b11, 0b01, 2));
    CHECK(clash.kind == MonoCheck::Kind::NotMonochromatic);
    CHECK(clash.witness_a == Entry{0, 0});
    CHECK(clash.witness_b == Entry{1, 0});

    const EntrySet empty(2);
    CHECK(mono_value_of(gen_latin(2), empty, Rectangle::full(2)).kind ==
          MonoCheck::Kind::EmptyIntersection);
}

TEST_CASE("min_mono_cover hand instances") {
    const BaseFunction constant = oracle::grid(3, 2, {0, 0, 0, 0, 0, 0, 0, 0, 0});
    const CoverResult one = min_mono_cover(constant, EntrySet::full(3));
    CHECK(one.exact);
    CHECK(one.cover.chi() == 1);
    CHECK(one.cover.members[0].rect == Rectangle::full(3));

    const CoverResult latin = min_mono_cover(gen_latin(2), EntrySet::full(2));
    CHECK(latin.exact);
    CHECK(latin.cover.chi() == 4);  // only singleton rectangles are monochromatic
    CHECK(serialize_cover(latin.cover) == "nofcover 1\n2 4\n1 1 0\n1 2 1\n2 1 1\n2 2 0\n");
}

TEST_CASE("min_mono_cover matches the exhaustive set-cover oracle") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const int n = 2 + static_cast<int>(seed % 3);  // 2..4
        const int N = 2 + static_cast<int>(seed % 3);
        const BaseFunction A = gen_random(2, n, N, seed);
        const EntrySet full = EntrySet::full(n);
        const CoverResult got = min_mono_cover(A, full);
        REQUIRE(got.exact);
        CHECK(got.cover.chi() == oracle::exhaustive_min_cover(A, full));
    }
}

TEST_CASE("min_mono_cover covers partial scopes") {
    // scope = the two value-0 entries of the Latin square; the full square is
    // monochromatic there
    EntrySet scope(2);
    scope.insert({0, 0});
    scope.insert({1, 1});
    const CoverResult r = min_mono_cover(gen_latin(2), scope);
    CHECK(r.exact);
    CHECK(r.cover.chi() == 1);

    const CoverResult empty = min_mono_cover(gen_latin(2), EntrySet(2));
    CHECK(empty.cover.chi() == 0);
}

TEST_CASE("min_mono_cover falls back to greedy past the node budget") {
    const BaseFunction A = gen_random(2, 4, 2, 5);
    CoverSearchLimits limits;
    limits.node_budget = 1;
    const CoverResult r = min_mono_cover(A, EntrySet::full(4), limits);
    CHECK_FALSE(r.exact);
    CHECK_NOTHROW(validate_cover(A, r.cover));  // still a valid cover
    CHECK(r.cover.chi() >= min_mono_cover(A, EntrySet::full(4)).cover.chi());
}

TEST_CASE("cover_cc is the ceiling log of the member count") {
    const BaseFunction constant = oracle::grid(2, 2, {0, 0, 0, 0});
    const CoverResult one = min_mono_cover(constant, EntrySet::full(2));
    CHECK(cover_cc(one.cover) == 0);

    const CoverResult four = min_mono_cover(gen_latin(2), EntrySet::full(2));
    CHECK(cover_cc(four.cover) == 2);

    MonoCover five;
    five.side = 2;
    five.scope = EntrySet::full(2);
    for (int i = 0; i < 5; ++i) five.members.push_back({Rectangle::full(2), 0});
    CHECK(cover_cc(five) == 3);

    MonoCover empty;
    empty.side = 2;
    empty.scope = EntrySet::full(2);
    CHECK_THROWS_AS(cover_cc(empty), StructuralError);

    empty.scope = EntrySet(2);
    CHECK(cover_cc(empty) == 0);
}

TEST_CASE("simulate_cover_protocol replays the hand trace on the Latin square") {
    const BaseFunction latin = gen_latin(2);
    const EntrySet full = EntrySet::full(2);
    const MonoCover cover = min_mono_cover(latin, full).cover;

    const CoverProtocolRun run = simulate_cover_protocol(latin, full, cover, {1, 0});
    CHECK(run.membership == std::vector<std::uint8_t>{1, 0, 1, 0});
    CHECK(run.member_index == 2);
    CHECK(run.output == 1);
    CHECK(run.bit_cost == 6);  // chi + ceil(log2 chi) = 4 + 2
    CHECK(run.transcript == "101010");
}

TEST_CASE("simulate_cover_protocol on a one-member cover costs a single bit") {
    const BaseFunction constant = oracle::grid(2, 5, {3, 3, 3, 3});
    const EntrySet full = EntrySet::full(2);
    const MonoCover cover = min_mono_cover(constant, full).cover;
    const CoverProtocolRun run = simulate_cover_protocol(constant, full, cover, {0, 1});
    CHECK(run.bit_cost == 1);
    CHECK(run.output == 3);
    CHECK(run.transcript == "1");
}

TEST_CASE("simulate_cover_protocol outputs the function value on every input") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const int n = 2 + static_cast<int>(seed % 3);
        const BaseFunction A = gen_random(2, n, 3, seed);
        const EntrySet full = EntrySet::full(n);
        const MonoCover cover = min_mono_cover(A, full).cover;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const CoverProtocolRun run = simulate_cover_protocol(A, full, cover, {r, c});
                CHECK(run.output == A.at(r, c));
                CHECK(run.bit_cost ==
                      static_cast<int>(cover.chi()) + ceil_log2(cover.chi()));
            }
    }
}

TEST_CASE("simulate_cover_protocol rejects inputs outside the scope") {
    const BaseFunction latin = gen_latin(2);
    EntrySet scope(2);
    scope.insert({0, 0});
    scope.insert({1, 1});
    const MonoCover cover = min_mono_cover(latin, scope).cover;
    CHECK_THROWS_AS(simulate_cover_protocol(latin, scope, cover, {0, 1}), PreconditionError);
}

TEST_CASE("simulate_cover_protocol rejects covers that miss the input") {
    const BaseFunction latin = gen_latin(2);
    const EntrySet full = EntrySet::full(2);
    MonoCover broken = min_mono_cover(latin, full).cover;
    broken.members.pop_back();  // (1,1) loses its only covering member
    CHECK_THROWS_AS(simulate_cover_protocol(latin, full, broken, {1, 1}), StructuralError);
}

TEST_CASE("det_sim_bound arithmetic and guards") {
    CHECK(det_sim_bound(2, 0) == 1);
    CHECK(det_sim_bound(3, 2) == 10);
    CHECK(det_sim_bound(4, 3) == 27);
    CHECK_THROWS_AS(det_sim_bound(1, 3), RangeError);
    CHECK_THROWS_AS(det_sim_bound(3, 41), RangeError);
    CHECK_THROWS_AS(det_sim_bound(3, -1), RangeError);
}
