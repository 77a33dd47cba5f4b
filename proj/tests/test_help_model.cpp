#include <cmath>

#include <doctest.h>

#include "nof/help_model.hpp"
#include "oracles.hpp"

using namespace nof;

TEST_CASE("det_cc_exact_2p hand values") {
    const BaseFunction constant = oracle::grid(3, 2, std::vector<std::int32_t>(9, 1));
    CHECK(det_cc_exact_2p(constant, EntrySet::full(3)).bits == 0);

    // the 1-bit XOR table: no single bit determines both outputs
    CHECK(det_cc_exact_2p(gen_latin(2), EntrySet::full(2)).bits == 2);

    // restricted to one value class the Latin square is constant
    EntrySet diag(2);
    diag.insert({0, 0});
    diag.insert({1, 1});
    CHECK(det_cc_exact_2p(gen_latin(2), diag).bits == 0);
}

TEST_CASE("det_cc_exact_2p equals protocol enumeration on all 2x2 binary tables") {
    for (int code = 0; code < 16; ++code) {
        const BaseFunction A = oracle::grid(
            2, 2, {code & 1, (code >> 1) & 1, (code >> 2) & 1, (code >> 3) & 1});
        const EntrySet full = EntrySet::full(2);
        CHECK(*det_cc_exact_2p(A, full).bits == oracle::protocol_enumeration_cc(A, full));
    }
}

TEST_CASE("det_cc_exact_2p equals protocol enumeration on seeded 3x3 tables") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const BaseFunction A = gen_random(2, 3, 2, seed);
        const EntrySet full = EntrySet::full(3);
        CHECK(*det_cc_exact_2p(A, full).bits == oracle::protocol_enumeration_cc(A, full));
    }
}

TEST_CASE("det_cc_exact_2p honors its limits") {
    DetCcLimits limits;
    limits.depth_limit = 1;
    const DetCcResult r = det_cc_exact_2p(gen_latin(2), EntrySet::full(2), limits);
    CHECK(r.exceeded);
    CHECK_FALSE(r.bits.has_value());

    CHECK_THROWS_AS(det_cc_exact_2p(gen_latin(9), EntrySet::full(9)), RangeError);
}

TEST_CASE("partition_cost matches the module examples") {
    const BaseFunction latin = gen_latin(2);

    Partition single;
    single.side = 2;
    single.parts.push_back(EntrySet::full(2));
    CHECK(partition_cost(latin, single, CostMode::Deterministic).cost == 2);

    const BaseFunction constant = oracle::grid(2, 2, {0, 0, 0, 0});
    Partition csingle;
    csingle.side = 2;
    csingle.parts.push_back(EntrySet::full(2));
    CHECK(partition_cost(constant, csingle, CostMode::Deterministic).cost == 0);

    // Value classes of the Latin square: each part is constant, and the full
    // square is monochromatic on it, so one cover member suffices per part.
    const Partition classes = value_bucket_partition(latin, 1);
    REQUIRE(classes.parts.size() == 2);
    CHECK(partition_cost(latin, classes, CostMode::Nondeterministic).cost == 1);
    CHECK(partition_cost(latin, classes, CostMode::Deterministic).cost == 1);
}

TEST_CASE("partition_cost with a single part equals det_cc on the full scope") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const BaseFunction A = gen_random(2, 3, 3, seed);
        Partition single;
        single.side = 3;
        single.parts.push_back(EntrySet::full(3));
        CHECK(partition_cost(A, single, CostMode::Deterministic).cost ==
              det_cc_exact_2p(A, EntrySet::full(3)).bits);
    }
}

TEST_CASE("partition validation rejects malformed partitions") {
    Partition overlap;
    overlap.side = 2;
    overlap.parts.push_back(EntrySet::full(2));
    overlap.parts.push_back(EntrySet::full(2));
    CHECK_THROWS_AS(overlap.validate(), StructuralError);

    Partition hole;
    hole.side = 2;
    EntrySet part(2);
    part.insert({0, 0});
    hole.parts.push_back(part);
    CHECK_THROWS_AS(hole.validate(), StructuralError);
}

TEST_CASE("value_bucket_partition buckets are contiguous value ranges") {
    const BaseFunction latin = gen_latin(2);

    const Partition whole = value_bucket_partition(latin, 0);
    REQUIRE(whole.parts.size() == 1);
    CHECK(whole.parts[0] == EntrySet::full(2));

    const Partition classes = value_bucket_partition(latin, 1);
    REQUIRE(classes.parts.size() == 2);
    EntrySet diag(2);
    diag.insert({0, 0});
    diag.insert({1, 1});
    CHECK(classes.parts[0] == diag);

    // at b = ceil(log2 colors) the parts are exactly the value classes
    const BaseFunction A = gen_random(2, 4, 3, 5);
    const Partition vc = value_bucket_partition(A, 2);
    for (const EntrySet& part : vc.parts) {
        const auto entries = part.entries();
        for (const Entry& e : entries)
            CHECK(A.at(e.row, e.col) == A.at(entries[0].row, entries[0].col));
    }

    CHECK_THROWS_AS(value_bucket_partition(A, 3), RangeError);
}

TEST_CASE("best_partition_micro explores every bipartition at micro scale") {
    const BaseFunction constant = oracle::grid(2, 2, {1, 1, 1, 1});
    const BestPartitionResult c = best_partition_micro(constant, 1, CostMode::Deterministic);
    CHECK(c.exhaustive);
    CHECK(c.cost == 0);
    CHECK(c.partition.parts.size() == 1);  // nothing beats zero communication

    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const BaseFunction A = gen_random(2, 3, 2, seed);
        const BestPartitionResult best = best_partition_micro(A, 1, CostMode::Deterministic);
        REQUIRE(best.exhaustive);
        REQUIRE(best.cost.has_value());

        // independent sweep over the same family
        int expect = *det_cc_exact_2p(A, EntrySet::full(3)).bits;
        for (std::uint64_t mask = 1; mask < 511; mask += 2) {
            Partition p;
            p.side = 3;
            EntrySet a(3), b(3);
            for (int e = 0; e < 9; ++e)
                ((mask >> e) & 1 ? a : b).insert({e / 3, e % 3});
            p.parts.push_back(a);
            p.parts.push_back(b);
            expect = std::min(expect, *partition_cost(A, p, CostMode::Deterministic).cost);
        }
        CHECK(*best.cost == expect);

        // more help never hurts at the exhaustive scale
        const BestPartitionResult b0 = best_partition_micro(A, 0, CostMode::Deterministic);
        CHECK(*b0.cost >= *best.cost);
    }
}

TEST_CASE("best_partition_micro falls back to the canonical family") {
    const BaseFunction latin = gen_latin(2);
    const BestPartitionResult nondet = best_partition_micro(latin, 1, CostMode::Nondeterministic);
    CHECK(nondet.cost <= 2);  // the value-bucket candidate already achieves this

    const BaseFunction big = gen_random(2, 4, 4, 3);  // 16 entries > 9: heuristic mode
    const BestPartitionResult h = best_partition_micro(big, 2, CostMode::Deterministic);
    CHECK_FALSE(h.exhaustive);
    REQUIRE(h.cost.has_value());
    Partition single;
    single.side = 4;
    single.parts.push_back(EntrySet::full(4));
    CHECK(*h.cost <= *partition_cost(big, single, CostMode::Deterministic).cost);
}

TEST_CASE("pad_help_bits arithmetic") {
    CHECK(pad_help_bits(2, 5, 4) == std::pair{4, 3});
    CHECK(pad_help_bits(3, 1, 3) == std::pair{3, 1});
    CHECK_THROWS_AS(pad_help_bits(0, 2, 3), PreconditionError);
    CHECK_THROWS_AS(pad_help_bits(4, 2, 3), PreconditionError);  // cannot shrink help

    // total cost is preserved, and h = b is a fixed point
    for (int h = 0; h <= 4; ++h)
        for (int c = 0; c <= 4; ++c)
            for (int b = h; b <= h + c; ++b) {
                const auto [h2, c2] = pad_help_bits(h, c, b);
                CHECK(h2 + c2 == h + c);
                CHECK(h2 == b);
                if (h == b) CHECK(pad_help_bits(h2, c2, b) == std::pair{h2, c2});
            }
}

TEST_CASE("bound evaluators are plain arithmetic") {
    CHECK(graph_det_lower_bound(12, 3, 4, 1) == 1);  // min(12 - 2*4, 1)
    CHECK(graph_det_lower_bound(12, 3, 4, 9) == 4);

    CHECK(*loglog_identity(4, 3, 1.0) ==
          doctest::Approx(5.0 + 3.0 * std::log2(3.0)).epsilon(1e-12));

    CHECK(*gt_lift_lower_bound(8, 16) == 2);  // min(8/4, 4)
    CHECK_FALSE(gt_lift_lower_bound(8, 1).has_value());

    CHECK(*graph_nondet_lower_bound(10, 4, 3, 5) == 5);  // min(10 - 2 - 3 + 1, 5)
    CHECK(*graph_nondet_lower_bound(10, 4, 3, 9) == 6);

    const double inner = *nondet_from_det_bound(12, 4, 2);
    CHECK(inner == doctest::Approx(std::min(std::log2(10.0) - 1 - 2, 2.0)).epsilon(1e-12));
    CHECK_FALSE(nondet_from_det_bound(1, 4, 2).has_value());  // dh <= log N
}

TEST_CASE("harness_verify on the Latin square passes every check") {
    const ComplexityReport rep = harness_verify(gen_latin(2));
    CHECK(rep.chi_star == 2);
    CHECK(rep.cover_chi == 4);
    CHECK(rep.disc == Rational(1, 8));
    CHECK(rep.det_cc_full == 2);
    REQUIRE(rep.checks.size() == 5);
    for (const CheckRecord& c : rep.checks) CHECK(c.verdict == Verdict::Pass);
    CHECK(rep.all_passed());
}

TEST_CASE("harness_verify on a constant function passes with zeros and ones") {
    const ComplexityReport rep = harness_verify(oracle::grid(2, 2, {0, 0, 0, 0}));
    CHECK(rep.chi_star == 1);
    CHECK(rep.cover_chi == 1);
    CHECK(rep.det_cc_full == 0);
    CHECK(rep.disc == Rational(1, 2));
    CHECK(rep.all_passed());
}

TEST_CASE("harness_verify skips the degenerate one-color bound") {
    const ComplexityReport rep = harness_verify(oracle::grid(2, 1, {0, 0, 0, 0}));
    CHECK(rep.checks[0].verdict == Verdict::Skipped);  // disc is zero, bound vacuous
    CHECK(rep.all_passed());
}

TEST_CASE("harness_verify holds on seeded micro instances") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const int n = 2 + static_cast<int>(seed % 3);  // 2..4
        const int N = 2 + static_cast<int>(seed % 2);  // 2..3
        const ComplexityReport rep = harness_verify(gen_random(2, n, N, seed));
        for (const CheckRecord& c : rep.checks) CHECK(c.verdict != Verdict::Fail);
    }
}

TEST_CASE("harness_verify rejects instances past the exact limit") {
    CHECK_THROWS_AS(harness_verify(gen_latin(5)), RangeError);
}
