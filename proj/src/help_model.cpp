#include "nof/help_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nof {

void Partition::validate() const {
    if (side < 1) throw StructuralError("partition needs side >= 1");
    if (parts.empty()) throw StructuralError("partition needs at least one part");
    EntrySet seen(side);
    for (const EntrySet& p : parts) {
        if (p.side() != side) throw StructuralError("part side does not match the partition");
        if (p.empty()) throw StructuralError("partition holds an empty part");
        for (const Entry& e : p.entries()) {
            if (seen.contains(e)) throw StructuralError("partition parts overlap");
            seen.insert(e);
        }
    }
    if (seen.count() != side * side) throw StructuralError("partition does not cover the grid");
}

namespace {

// Memoized protocol search over (row mask, column mask) states.
struct DetCcSearch {
    const BaseFunction& A;
    int n;
    std::vector<std::uint64_t> live_cols_in_scope;  // per row: columns with a scope entry
    std::vector<std::int8_t> memo;

    DetCcSearch(const BaseFunction& a, const EntrySet& S) : A(a), n(a.side) {
        live_cols_in_scope.assign(static_cast<std::size_t>(n), 0);
        for (const Entry& e : S.entries())
            live_cols_in_scope[static_cast<std::size_t>(e.row)] |= std::uint64_t{1} << e.col;
        memo.assign(std::size_t{1} << (2 * n), -1);
    }

    bool constant_on(std::uint64_t rows, std::uint64_t cols) const {
        int value = -1;
        for (std::uint64_t r = rows; r;) {
            const int x = std::countr_zero(r);
            r &= r - 1;
            std::uint64_t live = live_cols_in_scope[static_cast<std::size_t>(x)] & cols;
            while (live) {
                const int y = std::countr_zero(live);
                live &= live - 1;
                const int v = A.at(x, y);
                if (value < 0)
                    value = v;
                else if (v != value)
                    return false;
            }
        }
        return true;  // constant, or no live entry at all
    }

    int cost(std::uint64_t rows, std::uint64_t cols) {
        const std::size_t key = (static_cast<std::size_t>(rows) << n) | cols;
        if (memo[key] >= 0) return memo[key];
        int best;
        if (constant_on(rows, cols)) {
            best = 0;
        } else {
            best = 127;
            // One player splits their live set into two non-empty halves; an
            // optimal protocol never sends a constant bit.
            const std::uint64_t row_low = rows & (~rows + 1);
            for (std::uint64_t sub = (rows - 1) & rows; sub; sub = (sub - 1) & rows) {
                if (!(sub & row_low)) continue;  // each unordered split once
                best = std::min(best, 1 + std::max(cost(sub, cols), cost(rows & ~sub, cols)));
            }
            const std::uint64_t col_low = cols & (~cols + 1);
            for (std::uint64_t sub = (cols - 1) & cols; sub; sub = (sub - 1) & cols) {
                if (!(sub & col_low)) continue;
                best = std::min(best, 1 + std::max(cost(rows, sub), cost(rows, cols & ~sub)));
            }
        }
        memo[key] = static_cast<std::int8_t>(best);
        return best;
    }
};

}  // namespace

DetCcResult det_cc_exact_2p(const BaseFunction& A, const EntrySet& S, const DetCcLimits& limits) {
    if (A.dims != 2) throw DimensionError("protocol search is defined for dims == 2");
    if (S.side() != A.side) throw StructuralError("scope side does not match the function");
    if (A.side > limits.side_max || A.side > 12) {
        std::ostringstream msg;
        msg << "exact protocol search supports side <= " << std::min(limits.side_max, 12);
        throw RangeError(msg.str());
    }

    DetCcSearch search(A, S);
    const std::uint64_t full = (std::uint64_t{1} << A.side) - 1;
    const int bits = search.cost(full, full);
    if (bits > limits.depth_limit) return {std::nullopt, true};
    return {bits, false};
}

PartitionCostResult partition_cost(const BaseFunction& A, const Partition& partition,
                                   CostMode mode, const PartitionCostLimits& limits) {
    partition.validate();
    if (partition.side != A.side) throw StructuralError("partition side does not match the function");

    const int t = partition.help_bits();
    int worst = 0;
    for (std::size_t i = 0; i < partition.parts.size(); ++i) {
        int part_cost = 0;
        if (mode == CostMode::Deterministic) {
            const DetCcResult r = det_cc_exact_2p(A, partition.parts[i], limits.det);
            if (r.exceeded) return {std::nullopt, true, static_cast<int>(i)};
            part_cost = *r.bits;
        } else {
            const CoverResult r = min_mono_cover(A, partition.parts[i], limits.cover);
            if (!r.exact) return {std::nullopt, true, static_cast<int>(i)};
            part_cost = cover_cc(r.cover);
        }
        worst = std::max(worst, part_cost);
    }
    return {t + worst, false, -1};
}

Partition value_bucket_partition(const BaseFunction& A, int b) {
    if (A.dims != 2) throw DimensionError("partitions are defined for dims == 2");
    const int max_b = ceil_log2(static_cast<std::uint64_t>(A.colors));
    if (b < 0 || b > max_b) {
        std::ostringstream msg;
        msg << "bucket count 2^b must satisfy 0 <= b <= ceil(log2 colors) = " << max_b;
        throw RangeError(msg.str());
    }
    const std::int64_t buckets = std::int64_t{1} << b;
    Partition p;
    p.side = A.side;
    for (std::int64_t i = 0; i < buckets; ++i) {
        const std::int64_t lo = i * A.colors / buckets;
        const std::int64_t hi = (i + 1) * A.colors / buckets;
        EntrySet part(A.side);
        for (int r = 0; r < A.side; ++r)
            for (int c = 0; c < A.side; ++c) {
                const int v = A.at(r, c);
                if (v >= lo && v < hi) part.insert({r, c});
            }
        if (!part.empty()) p.parts.push_back(std::move(part));
    }
    return p;
}

BestPartitionResult best_partition_micro(const BaseFunction& A, int b, CostMode mode,
                                         const PartitionCostLimits& limits) {
    if (A.dims != 2) throw DimensionError("partitions are defined for dims == 2");
    if (b < 0) throw RangeError("help bits must be >= 0");
    const int n = A.side;

    BestPartitionResult best;
    const auto consider = [&](Partition cand) {
        const PartitionCostResult r = partition_cost(A, cand, mode, limits);
        if (r.exceeded) {
            best.exceeded = true;
            return;
        }
        if (!best.cost || *r.cost < *best.cost) {
            best.cost = r.cost;
            best.partition = std::move(cand);
        }
    };

    Partition single;
    single.side = n;
    single.parts.push_back(EntrySet::full(n));
    consider(std::move(single));

    const bool exhaustive = n * n <= 9 && b <= 1;
    if (exhaustive) {
        if (b >= 1) {
            // Every unordered bipartition; the representative mask keeps
            // entry 0 in the first part.
            const std::uint64_t full = (std::uint64_t{1} << (n * n)) - 1;
            for (std::uint64_t mask = 1; mask < full; mask += 2) {
                Partition cand;
                cand.side = n;
                EntrySet a(n), bset(n);
                for (int e = 0; e < n * n; ++e) {
                    const Entry entry{e / n, e % n};
                    if ((mask >> e) & 1)
                        a.insert(entry);
                    else
                        bset.insert(entry);
                }
                cand.parts.push_back(std::move(a));
                cand.parts.push_back(std::move(bset));
                consider(std::move(cand));
            }
        }
        best.exhaustive = true;
        return best;
    }

    const int max_bucket_b = ceil_log2(static_cast<std::uint64_t>(A.colors));
    for (int bp = 1; bp <= std::min(b, max_bucket_b); ++bp)
        consider(value_bucket_partition(A, bp));
    best.exhaustive = false;
    return best;
}

std::pair<int, int> pad_help_bits(int h, int c, int b) {
    if (h < 0 || c < 0 || b < 0) throw RangeError("help and communication bits must be >= 0");
    if (b < h) throw PreconditionError("cannot shrink the help string: b < h");
    if (b > h + c)
        throw PreconditionError("infeasible: not enough communication bits to reach b help bits");
    return {b, c - (b - h)};
}

double graph_det_lower_bound(double dh, int k, int colors, int b) {
    return std::min(dh - static_cast<double>(k - 1) * colors, static_cast<double>(b));
}

std::optional<double> graph_nondet_lower_bound(double nh, int colors, int k, int b) {
    if (colors < 1) return std::nullopt;
    return std::min(nh - std::log2(static_cast<double>(colors)) - k + 1, static_cast<double>(b));
}

std::optional<double> loglog_identity(int colors, int k, double c) {
    if (colors < 1 || k < 1 || c <= 0) return std::nullopt;
    return std::log2(static_cast<double>(colors)) + k + 3 * std::log2(static_cast<double>(k)) +
           2 * std::log2(c);
}

std::optional<double> gt_lift_lower_bound(double dh, int colors) {
    if (colors < 2) return std::nullopt;
    const double log_n = std::log2(static_cast<double>(colors));
    return std::min(dh / log_n, log_n);
}

std::optional<double> nondet_from_det_bound(double dh, int colors, int k) {
    if (colors < 1 || k < 1) return std::nullopt;
    const double log_n = std::log2(static_cast<double>(colors));
    const double inner = dh - log_n;
    if (inner <= 0) return std::nullopt;
    return std::min(std::log2(inner) - std::log2(static_cast<double>(k)) - k, log_n);
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Skipped: return "SKIP";
    }
    throw InternalInvariantError("unknown verdict");
}

bool ComplexityReport::all_passed() const {
    for (const CheckRecord& c : checks)
        if (c.verdict == Verdict::Fail) return false;
    return true;
}

ComplexityReport harness_verify(const BaseFunction& A, const HarnessLimits& limits) {
    if (A.dims != 2) throw DimensionError("the harness is defined for dims == 2");
    A.validate();
    if (A.side > limits.exact_side_max) {
        std::ostringstream msg;
        msg << "exact harness supports side <= " << limits.exact_side_max;
        throw RangeError(msg.str());
    }

    const int n = A.side;
    const int N = A.colors;
    ComplexityReport rep;
    rep.side = n;
    rep.colors = N;

    // Star-side measures.
    const Coloring greedy = color_greedy(A);
    rep.greedy_colors = greedy.colors_used;
    const PeelingTrace trace = peel(A, greedy);
    rep.peel_iterations = trace.iteration_count();
    ChiStarLimits chi_limits = limits.chi;
    chi_limits.max_colors = std::max(chi_limits.max_colors, greedy.colors_used);
    const ChiStarResult chi = chi_star_exact(A, chi_limits);
    rep.chi_star = chi.colors;
    rep.chi_exceeded = chi.exceeded;

    // Cover and discrepancy on the full scope.
    const EntrySet full = EntrySet::full(n);
    const CoverResult cover_full = min_mono_cover(A, full, limits.cover);
    rep.cover_chi = cover_full.cover.chi();
    rep.cover_bits = cover_cc(cover_full.cover);
    rep.cover_exact = cover_full.exact;
    const DiscResult disc = disc_rect_exact(A);
    rep.disc = disc.value;
    rep.disc_exact = !disc.sampled;
    rep.disc_bound_bits = disc_help_lower_bound(disc.value, 0, N);

    const DetCcResult det_full = det_cc_exact_2p(A, full, limits.det);
    rep.det_cc_full = det_full.bits;

    // Value-bucket partitions for every feasible b, with per-part measures.
    PartitionCostLimits pc_limits{limits.det, limits.cover};
    const int max_b = ceil_log2(static_cast<std::uint64_t>(N));
    std::vector<Partition> bucket_partitions;
    for (int b = 0; b <= max_b; ++b) {
        Partition p = value_bucket_partition(A, b);
        PartitionRow row;
        row.help_bits = b;
        row.part_count = p.parts.size();
        const PartitionCostResult det_cost = partition_cost(A, p, CostMode::Deterministic, pc_limits);
        const PartitionCostResult nondet_cost =
            partition_cost(A, p, CostMode::Nondeterministic, pc_limits);
        row.det_cost = det_cost.cost;
        row.nondet_cost = nondet_cost.cost;
        rep.value_bucket_rows.push_back(row);
        bucket_partitions.push_back(std::move(p));
    }

    const auto make_check = [&](const std::string& name, std::optional<double> lhs,
                                std::optional<double> rhs, const std::string& skip_note,
                                const std::string& pair_note) {
        CheckRecord c;
        c.name = name;
        if (!lhs || !rhs) {
            c.verdict = Verdict::Skipped;
            c.note = skip_note;
        } else {
            c.lhs = *lhs;
            c.rhs = *rhs;
            c.verdict = *lhs <= *rhs + 1e-9 ? Verdict::Pass : Verdict::Fail;
            c.note = pair_note;
        }
        rep.checks.push_back(c);
    };

    // (1) Discrepancy lower bound never exceeds the exact protocol cost.
    make_check("disc_bound_le_det_cc",
               rep.disc_bound_bits,
               det_full.bits ? std::optional<double>(*det_full.bits) : std::nullopt,
               rep.disc_bound_bits ? "exact protocol cost unavailable" : "bound inapplicable",
               "full scope");

    // (2) Cover bits never exceed the exact protocol cost, on the full scope
    // and on every part of the tested partitions. The recorded pair is the
    // tightest one.
    // (3) The cover-replay protocol realizes chi + ceil(log2 chi) bits.
    {
        struct Pair {
            double lhs, rhs;
            std::string where;
        };
        std::vector<Pair> cover_vs_det, det_vs_replay;
        bool skipped2 = false, skipped3 = false;
        const auto add_scope = [&](const EntrySet& S, const std::string& where) {
            const CoverResult cov = min_mono_cover(A, S, limits.cover);
            const DetCcResult det = det_cc_exact_2p(A, S, limits.det);
            if (!cov.exact || !det.bits) {
                skipped2 = skipped3 = true;
                return;
            }
            cover_vs_det.push_back(
                {static_cast<double>(cover_cc(cov.cover)), static_cast<double>(*det.bits), where});
            const double replay =
                cov.cover.chi() == 0
                    ? 0
                    : static_cast<double>(cov.cover.chi()) + ceil_log2(cov.cover.chi());
            det_vs_replay.push_back({static_cast<double>(*det.bits), replay, where});
        };
        add_scope(full, "full scope");
        for (std::size_t i = 0; i < bucket_partitions.size(); ++i)
            for (std::size_t j = 0; j < bucket_partitions[i].parts.size(); ++j) {
                std::ostringstream where;
                where << "bucket partition b=" << i << " part " << j;
                add_scope(bucket_partitions[i].parts[j], where.str());
            }

        const auto emit = [&](const std::string& name, const std::vector<Pair>& pairs, bool skipped) {
            CheckRecord c;
            c.name = name;
            if (pairs.empty()) {
                c.verdict = Verdict::Skipped;
                c.note = "no scope inside exact limits";
            } else {
                const Pair* tightest = &pairs.front();
                bool fail = false;
                for (const Pair& p : pairs) {
                    if (p.lhs > p.rhs && !fail) {
                        fail = true;
                        tightest = &p;
                    } else if (!fail && p.rhs - p.lhs < tightest->rhs - tightest->lhs) {
                        tightest = &p;
                    }
                }
                c.lhs = tightest->lhs;
                c.rhs = tightest->rhs;
                c.verdict = fail ? Verdict::Fail : Verdict::Pass;
                c.note = tightest->where + (skipped ? "; some scopes skipped" : "");
            }
            rep.checks.push_back(c);
        };
        emit("cover_bits_le_det_cc", cover_vs_det, skipped2);
        emit("det_cc_le_cover_replay_cost", det_vs_replay, skipped3);
    }

    // (4) Peeling extracts one fresh color per iteration.
    make_check("peel_iterations_le_colors", static_cast<double>(rep.peel_iterations),
               static_cast<double>(rep.greedy_colors), "", "greedy coloring");

    // (5) More help never hurts, at the exhaustive scale.
    if (n * n <= 9) {
        const BestPartitionResult b0 =
            best_partition_micro(A, 0, CostMode::Deterministic, pc_limits);
        const BestPartitionResult b1 =
            best_partition_micro(A, 1, CostMode::Deterministic, pc_limits);
        rep.best_cost_b0 = b0.cost;
        rep.best_cost_b1 = b1.cost;
        make_check("more_help_never_hurts",
                   b1.cost ? std::optional<double>(*b1.cost) : std::nullopt,
                   b0.cost ? std::optional<double>(*b0.cost) : std::nullopt,
                   "exhaustive partition search exceeded its budget", "b=1 vs b=0");
    } else {
        CheckRecord c;
        c.name = "more_help_never_hurts";
        c.verdict = Verdict::Skipped;
        c.note = "exhaustive partition search needs side^2 <= 9";
        rep.checks.push_back(c);
    }

    return rep;
}

}  // namespace nof
