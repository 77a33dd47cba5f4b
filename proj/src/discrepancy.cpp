#include "nof/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>
#include <tuple>

#include "nof/prng.hpp"

namespace nof {

Rational disc_point(const BaseFunction& A, const Rectangle& S, int color) {
    if (A.dims != 2) throw DimensionError("discrepancy is defined for dims == 2");
    if (S.rows.universe() != A.side || S.cols.universe() != A.side)
        throw StructuralError("rectangle does not match the function side");
    if (color < 0 || color >= A.colors) throw RangeError("color outside [0, colors)");

    std::int64_t count = 0;
    for (int r : S.rows.indices())
        for (int c : S.cols.indices())
            if (A.at(r, c) == color) ++count;
    const std::int64_t area = S.area();
    const std::int64_t n2 = static_cast<std::int64_t>(A.side) * A.side;
    // |count - area/N| / n^2 with everything scaled by N to stay integral.
    std::int64_t scaled = A.colors * count - area;
    if (scaled < 0) scaled = -scaled;
    return Rational(scaled, static_cast<std::int64_t>(A.colors) * n2);
}

namespace {

struct WitnessCandidate {
    std::int64_t scaled_value = -1;  // |N*count - area|, common denominator N*n^2
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    int color = 0;

    // Larger value wins; ties go to the lexicographically least witness.
    bool better_than(const WitnessCandidate& o) const {
        if (scaled_value != o.scaled_value) return scaled_value > o.scaled_value;
        return std::tie(rows, cols, color) < std::tie(o.rows, o.cols, o.color);
    }
};

// Exact scan over one contiguous range of the Gray-code row-subset walk.
WitnessCandidate scan_row_subsets(const BaseFunction& A, std::uint64_t lo, std::uint64_t hi) {
    const int n = A.side;
    const int N = A.colors;
    std::vector<std::int64_t> col_count(static_cast<std::size_t>(n) * N, 0);
    const auto cell = [&](int col, int y) -> std::int64_t& {
        return col_count[static_cast<std::size_t>(col) * N + y];
    };

    std::uint64_t mask = lo ^ (lo >> 1);
    for (std::uint64_t m = mask; m;) {
        const int row = std::countr_zero(m);
        m &= m - 1;
        for (int col = 0; col < n; ++col) ++cell(col, A.at(row, col));
    }

    WitnessCandidate best;
    for (std::uint64_t i = lo; i < hi; ++i) {
        if (i != lo) {
            const int row = std::countr_zero(i);  // bit toggled from gray(i-1) to gray(i)
            const std::uint64_t bit = std::uint64_t{1} << row;
            mask ^= bit;
            const std::int64_t delta = (mask & bit) ? 1 : -1;
            for (int col = 0; col < n; ++col) cell(col, A.at(row, col)) += delta;
        }
        if (!mask) continue;
        const std::int64_t rs_size = std::popcount(mask);
        for (int y = 0; y < N; ++y) {
            std::int64_t pos_sum = 0, neg_sum = 0;
            std::uint64_t pos_mask = 0, neg_mask = 0;
            for (int col = 0; col < n; ++col) {
                const std::int64_t dev = N * cell(col, y) - rs_size;
                if (dev > 0) {
                    pos_sum += dev;
                    pos_mask |= std::uint64_t{1} << col;
                } else if (dev < 0) {
                    neg_sum -= dev;
                    neg_mask |= std::uint64_t{1} << col;
                }
            }
            const std::int64_t val = std::max(pos_sum, neg_sum);
            WitnessCandidate cand{val, mask, 0, y};
            if (val == 0) {
                cand.cols = 1;  // any non-empty column set attains 0; least is {0}
            } else if (pos_sum == val && (neg_sum != val || pos_mask < neg_mask)) {
                cand.cols = pos_mask;
            } else {
                cand.cols = neg_mask;
            }
            if (cand.better_than(best)) best = cand;
        }
    }
    return best;
}

}  // namespace

DiscResult disc_rect_exact(const BaseFunction& A, const DiscLimits& limits) {
    if (A.dims != 2) throw DimensionError("discrepancy is defined for dims == 2");
    A.validate();
    if (A.side > limits.exact_side_max || A.side > 62) {
        std::ostringstream msg;
        msg << "side " << A.side << " exceeds the exact discrepancy limit "
            << std::min(limits.exact_side_max, 62) << "; use sampling";
        throw RangeError(msg.str());
    }

    const int n = A.side;
    const std::uint64_t total = std::uint64_t{1} << n;
    int threads = limits.threads > 0 ? limits.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, 64);
    if (total < 1024) threads = 1;

    std::vector<std::future<WitnessCandidate>> parts;
    const std::uint64_t chunk = (total + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::uint64_t lo = std::min<std::uint64_t>(total, t * chunk);
        const std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
        if (lo >= hi) break;
        parts.push_back(std::async(std::launch::async,
                                   [&A, lo, hi] { return scan_row_subsets(A, lo, hi); }));
    }
    WitnessCandidate best;
    for (auto& f : parts) {
        const WitnessCandidate cand = f.get();
        if (cand.scaled_value >= 0 && cand.better_than(best)) best = cand;
    }

    const std::int64_t n2 = static_cast<std::int64_t>(n) * n;
    return DiscResult{Rational(best.scaled_value, static_cast<std::int64_t>(A.colors) * n2),
                      Rectangle::from_masks(best.rows, best.cols, n), best.color,
                      /*sampled=*/false};
}

namespace {

Bitset random_nonempty_subset(Rng& rng, int universe) {
    for (;;) {
        Bitset s(universe);
        for (int i = 0; i < universe; ++i)
            if (uniform_below(rng, 2)) s.set(i);
        if (s.any()) return s;
    }
}

}  // namespace

DiscResult disc_rect_sampled(const BaseFunction& A, int samples, std::uint64_t seed) {
    if (A.dims != 2) throw DimensionError("discrepancy is defined for dims == 2");
    A.validate();
    if (samples < 1) throw RangeError("samples must be >= 1");

    const int n = A.side;
    std::vector<Rectangle> family;
    family.reserve(static_cast<std::size_t>(samples) + 2 * n + 1);
    family.push_back(Rectangle::full(n));
    for (int r = 0; r < n; ++r) {
        Bitset rows(n);
        rows.set(r);
        family.push_back({rows, Bitset::full(n)});
    }
    for (int c = 0; c < n; ++c) {
        Bitset cols(n);
        cols.set(c);
        family.push_back({Bitset::full(n), cols});
    }
    Rng rng = seeded_rng(seed);
    for (int s = 0; s < samples; ++s) {
        Bitset rows = random_nonempty_subset(rng, n);
        Bitset cols = random_nonempty_subset(rng, n);
        family.push_back({std::move(rows), std::move(cols)});
    }

    DiscResult best;
    best.sampled = true;
    bool first = true;
    for (const Rectangle& rect : family) {
        for (int y = 0; y < A.colors; ++y) {
            const Rational v = disc_point(A, rect, y);
            const bool wins =
                first || v > best.value ||
                (v == best.value &&
                 std::tuple(rect.rows, rect.cols, y) <
                     std::tuple(best.witness_rect.rows, best.witness_rect.cols, best.witness_color));
            if (wins) {
                best.value = v;
                best.witness_rect = rect;
                best.witness_color = y;
                first = false;
            }
        }
    }
    return best;
}

std::optional<double> disc_help_lower_bound(const Rational& disc, int help_bits, int colors) {
    if (help_bits < 0 || help_bits > 62) throw RangeError("help_bits must lie in [0, 62]");
    if (colors < 1) throw RangeError("colors must be >= 1");
    if (disc.num() == 0) return std::nullopt;
    const std::int64_t budget = std::int64_t{1} << help_bits;
    if (budget >= colors) return std::nullopt;
    // (1 - 2^b / N) / disc, exactly, then one log at the end.
    const Rational ratio = Rational(colors - budget, colors) / disc;
    return std::log2(static_cast<double>(ratio.num())) -
           std::log2(static_cast<double>(ratio.den()));
}

std::vector<TrendRow> trace_trend(const std::vector<int>& qs, const std::vector<int>& ds, int k,
                                  int samples, std::uint64_t seed, const DiscLimits& limits) {
    if (k != 2) throw RangeError("the trend uses the rectangle family, which fixes k = 2");
    std::vector<TrendRow> rows;
    for (int q : qs) {
        for (int d : ds) {
            const BaseFunction A = gen_trace(q, d, k);
            TrendRow row;
            row.q = q;
            row.d = d;
            row.k = k;
            if (A.side <= limits.exact_side_max) {
                row.disc = disc_rect_exact(A, limits).value;
                row.exact = true;
            } else {
                row.disc = disc_rect_sampled(A, samples, seed).value;
                row.exact = false;
            }
            row.neg_log2_disc = row.disc.num() == 0
                                    ? std::numeric_limits<double>::infinity()
                                    : std::log2(static_cast<double>(row.disc.den())) -
                                          std::log2(static_cast<double>(row.disc.num()));
            row.predictor = static_cast<double>(d) * d * std::log2(static_cast<double>(q)) /
                            (static_cast<double>(k) * k * std::exp2(k));
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace nof
