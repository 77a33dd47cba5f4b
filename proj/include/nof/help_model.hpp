#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nof/cylinder_core.hpp"
#include "nof/discrepancy.hpp"
#include "nof/function_core.hpp"
#include "nof/rational.hpp"
#include "nof/star_analysis.hpp"

namespace nof {

/// Help-bit view of the domain: disjoint non-empty parts whose union is the
/// whole grid; a helper string of ceil(log2 parts) bits names the part.
struct Partition {
    int side = 0;
    std::vector<EntrySet> parts;

    int help_bits() const { return parts.empty() ? 0 : ceil_log2(parts.size()); }
    void validate() const;  // disjoint, union full, no empty part
};

struct DetCcLimits {
    int depth_limit = 62;
    int side_max = 8;  // memoization over row-set x column-set pairs
};

struct DetCcResult {
    std::optional<int> bits;
    bool exceeded = false;
};

/// Exact deterministic two-player complexity of A restricted to S, under the
/// transcript-determines-output convention: a protocol node splits one
/// side's live set into two non-empty halves, a leaf requires A constant on
/// the live entries of S. Memoized over sub-rectangle pairs.
DetCcResult det_cc_exact_2p(const BaseFunction& A, const EntrySet& S,
                            const DetCcLimits& limits = {});

enum class CostMode { Deterministic, Nondeterministic };

struct PartitionCostResult {
    std::optional<int> cost;
    bool exceeded = false;
    int offending_part = -1;  // part whose per-part routine hit its limit
};

struct PartitionCostLimits {
    DetCcLimits det;
    CoverSearchLimits cover;
};

/// ceil(log2 parts) + max over parts of the per-part complexity
/// (deterministic: exact protocol search; nondeterministic: log of the exact
/// minimum monochromatic cover).
PartitionCostResult partition_cost(const BaseFunction& A, const Partition& partition,
                                   CostMode mode, const PartitionCostLimits& limits = {});

/// Parts gather entries whose value falls in the same bucket of [0, colors)
/// split into 2^b contiguous buckets; empty buckets are dropped.
Partition value_bucket_partition(const BaseFunction& A, int b);

struct BestPartitionResult {
    Partition partition;
    std::optional<int> cost;
    bool exhaustive = false;  // true: genuine minimum over all partitions at this b
    bool exceeded = false;
};

/// Exhaustive minimum over all partitions when side^2 <= 9 and 2^b <= 2;
/// otherwise the best of the canonical candidates (single part and value
/// buckets for every b' <= b), flagged as heuristic.
BestPartitionResult best_partition_micro(const BaseFunction& A, int b, CostMode mode,
                                         const PartitionCostLimits& limits = {});

/// Moves initial communication bits into the help string so the help string
/// has exactly b bits: (h, c) -> (b, c - (b - h)). Total cost is preserved.
std::pair<int, int> pad_help_bits(int h, int c, int b);

/// Right-hand sides of the closed-form bounds, as pure arithmetic on
/// supplied measure values. All logs are base 2.
double graph_det_lower_bound(double dh, int k, int colors, int b);  // min(dh - (k-1)N, b)
std::optional<double> graph_nondet_lower_bound(double nh, int colors, int k,
                                               int b);  // min(nh - log N - k + 1, b)
std::optional<double> loglog_identity(int colors, int k, double c);  // log N + k + 3 log k + 2 log c
std::optional<double> gt_lift_lower_bound(double dh, int colors);    // min(dh / log N, log N)
std::optional<double> nondet_from_det_bound(double dh, int colors,
                                            int k);  // min(log(dh - log N) - log k - k, log N)

enum class Verdict { Pass, Fail, Skipped };

std::string_view verdict_name(Verdict v);

struct CheckRecord {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    Verdict verdict = Verdict::Skipped;
    std::string note;  // skip reason, or where the tightest pair came from
};

struct PartitionRow {
    int help_bits = 0;
    std::size_t part_count = 0;
    std::optional<int> det_cost;
    std::optional<int> nondet_cost;
};

/// Everything the harness computed for one instance, with one verdict per
/// desk-checkable relation.
struct ComplexityReport {
    int side = 0;
    int colors = 0;
    std::optional<int> chi_star;
    bool chi_exceeded = false;
    int greedy_colors = 0;
    std::size_t peel_iterations = 0;
    std::size_t cover_chi = 0;
    int cover_bits = 0;
    bool cover_exact = true;
    Rational disc;
    bool disc_exact = true;
    std::optional<double> disc_bound_bits;  // help-free discrepancy bound
    std::optional<int> det_cc_full;
    std::vector<PartitionRow> value_bucket_rows;
    std::optional<int> best_cost_b0;  // exhaustive minima when in range
    std::optional<int> best_cost_b1;
    std::vector<CheckRecord> checks;

    bool all_passed() const;
};

struct HarnessLimits {
    int exact_side_max = 4;
    ChiStarLimits chi;
    CoverSearchLimits cover;
    DetCcLimits det;
};

/// Computes every measure on a micro instance and verifies the five
/// desk-checkable relations; limit overruns downgrade a check to Skipped.
ComplexityReport harness_verify(const BaseFunction& A, const HarnessLimits& limits = {});

}  // namespace nof
