#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nof/cylinder_core.hpp"
#include "nof/function_core.hpp"
#include "nof/rational.hpp"

namespace nof {

/// Maximum normalized deviation over a rectangle family, with the witness
/// that attains it.
struct DiscResult {
    Rational value;
    Rectangle witness_rect;
    int witness_color = 0;
    bool sampled = false;  // false: exact over all non-empty rectangles
};

/// | #{(r,c) in S : A(r,c) = color} - |S| / colors | / side^2, exact.
Rational disc_point(const BaseFunction& A, const Rectangle& S, int color);

struct DiscLimits {
    int exact_side_max = 20;  // the exact scan enumerates 2^side row subsets
    int threads = 0;          // 0: machine parallelism
};

/// Exact maximum of disc_point over all non-empty rectangles and colors.
/// Per row subset the per-column deviations are additive, so the optimal
/// column set is the all-positive or all-negative columns; O(2^n * n * N).
/// Witness is the lexicographically least (rows, cols, color) maximizer.
DiscResult disc_rect_exact(const BaseFunction& A, const DiscLimits& limits = {});

/// Maximum of disc_point over the full square, every single row, every
/// single column, and `samples` seeded random rectangles. A certified lower
/// bound on the exact value.
DiscResult disc_rect_sampled(const BaseFunction& A, int samples, std::uint64_t seed);

/// log2((1 - 2^help_bits / colors) / disc); nullopt when disc is zero or
/// 2^help_bits >= colors, where the bound is vacuous.
std::optional<double> disc_help_lower_bound(const Rational& disc, int help_bits, int colors);

struct TrendRow {
    int q = 0, d = 0, k = 0;
    bool exact = true;
    Rational disc;
    double neg_log2_disc = 0;  // -log2(disc); +inf when disc == 0
    double predictor = 0;      // d^2 * log2(q) / (k^2 * 2^k)
};

/// Discrepancy of the matrix-product trace functions across (q, d) pairs,
/// exact when the side fits the limit and sampled (flagged) otherwise.
/// The rectangle family fixes k = 2.
std::vector<TrendRow> trace_trend(const std::vector<int>& qs, const std::vector<int>& ds, int k,
                                  int samples, std::uint64_t seed, const DiscLimits& limits = {});

}  // namespace nof
