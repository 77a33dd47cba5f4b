#pragma once

// Brute-force reference implementations, kept independent of the library's
// search code. Everything here enumerates the definition directly.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "nof/cylinder_core.hpp"
#include "nof/function_core.hpp"
#include "nof/rational.hpp"
#include "nof/star_analysis.hpp"

namespace oracle {

inline nof::BaseFunction grid(int side, int colors, std::vector<std::int32_t> values) {
    return nof::BaseFunction{2, side, colors, std::move(values)};
}

// Quadruple loop over (x, y, x', y'), straight from the definition.
inline std::vector<nof::Star> naive_stars(const nof::BaseFunction& A) {
    std::vector<nof::Star> out;
    const int n = A.side;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int xp = 0; xp < n; ++xp)
                for (int yp = 0; yp < n; ++yp) {
                    if (xp == x || yp == y) continue;
                    const int z = A.at(xp, y);
                    if (A.at(x, yp) != z) continue;
                    if (A.at(x, y) == z) continue;
                    out.push_back({{x, y}, {xp, y}, {x, yp}, z, A.at(x, y)});
                }
    return out;
}

// Exhaustive star-free coloring search: row-major entries, ascending colors,
// increasing color budgets. Returns the minimum budget that admits a valid
// coloring, or nullopt past max_colors.
inline std::optional<int> exhaustive_chi_star(const nof::BaseFunction& A, int max_colors) {
    const int n = A.side;
    const int entries = n * n;
    const auto stars = naive_stars(A);

    // Stars keyed by their last entry in row-major order.
    std::vector<std::vector<std::pair<int, int>>> by_last(static_cast<std::size_t>(entries));
    for (const nof::Star& s : stars) {
        int e0 = s.base.row * n + s.base.col;
        int e1 = s.row_partner.row * n + s.row_partner.col;
        int e2 = s.col_partner.row * n + s.col_partner.col;
        if (e0 > e1) std::swap(e0, e1);
        if (e1 > e2) std::swap(e1, e2);
        if (e0 > e1) std::swap(e0, e1);
        by_last[static_cast<std::size_t>(e2)].push_back({e0, e1});
    }

    std::vector<int> color(static_cast<std::size_t>(entries), -1);
    const auto dfs = [&](auto&& self, int pos, int budget) -> bool {
        if (pos == entries) return true;
        for (int c = 0; c < budget; ++c) {
            bool ok = true;
            for (const auto& [a, b] : by_last[static_cast<std::size_t>(pos)])
                if (color[static_cast<std::size_t>(a)] == c &&
                    color[static_cast<std::size_t>(b)] == c) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            color[static_cast<std::size_t>(pos)] = c;
            if (self(self, pos + 1, budget)) return true;
            color[static_cast<std::size_t>(pos)] = -1;
        }
        return false;
    };
    for (int budget = 1; budget <= max_colors; ++budget)
        if (dfs(dfs, 0, budget)) return budget;
    return std::nullopt;
}

// Exhaustive minimum monochromatic cover: every non-empty rectangle is a
// candidate, branching on the first uncovered entry.
inline std::size_t exhaustive_min_cover(const nof::BaseFunction& A, const nof::EntrySet& S) {
    const int n = A.side;
    const auto scope = S.entries();
    if (scope.empty()) return 0;

    struct Cand {
        std::uint64_t covers;
    };
    std::vector<Cand> cands;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t rows = 1; rows <= full; ++rows)
        for (std::uint64_t cols = 1; cols <= full; ++cols) {
            int value = -1;
            bool mono = true;
            std::uint64_t covers = 0;
            for (std::size_t i = 0; i < scope.size(); ++i) {
                const nof::Entry e = scope[i];
                if (!((rows >> e.row) & 1) || !((cols >> e.col) & 1)) continue;
                const int v = A.at(e.row, e.col);
                if (value < 0)
                    value = v;
                else if (v != value) {
                    mono = false;
                    break;
                }
                covers |= std::uint64_t{1} << i;
            }
            if (mono && covers) cands.push_back({covers});
        }

    const std::uint64_t all = scope.size() == 64 ? ~std::uint64_t{0}
                                                 : (std::uint64_t{1} << scope.size()) - 1;
    std::size_t best = scope.size();  // singletons always suffice
    const auto dfs = [&](auto&& self, std::uint64_t uncovered, std::size_t used) -> void {
        if (!uncovered) {
            best = std::min(best, used);
            return;
        }
        if (used + 1 >= best) return;
        const int e = std::countr_zero(uncovered);
        for (const Cand& c : cands)
            if ((c.covers >> e) & 1) self(self, uncovered & ~c.covers, used + 1);
    };
    dfs(dfs, all, 0);
    return best;
}

// Full double loop over all non-empty row and column subsets and all colors.
inline nof::Rational brute_disc(const nof::BaseFunction& A) {
    const int n = A.side;
    const int N = A.colors;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::int64_t best_scaled = 0;
    for (std::uint64_t rows = 1; rows <= full; ++rows) {
        // per-column counts per color for this row set
        std::vector<std::int64_t> cnt(static_cast<std::size_t>(n) * N, 0);
        for (int r = 0; r < n; ++r) {
            if (!((rows >> r) & 1)) continue;
            for (int c = 0; c < n; ++c) ++cnt[static_cast<std::size_t>(c) * N + A.at(r, c)];
        }
        const std::int64_t rs = std::popcount(rows);
        for (std::uint64_t cols = 1; cols <= full; ++cols) {
            const std::int64_t area = rs * std::popcount(cols);
            for (int y = 0; y < N; ++y) {
                std::int64_t count = 0;
                for (int c = 0; c < n; ++c)
                    if ((cols >> c) & 1) count += cnt[static_cast<std::size_t>(c) * N + y];
                std::int64_t scaled = N * count - area;
                if (scaled < 0) scaled = -scaled;
                best_scaled = std::max(best_scaled, scaled);
            }
        }
    }
    return nof::Rational(best_scaled, static_cast<std::int64_t>(N) * n * n);
}

// Depth-bounded protocol existence, straight recursion with no memoization:
// a node splits one side's live set into two non-empty halves, a leaf needs
// the function constant on the live scope entries.
inline int protocol_enumeration_cc(const nof::BaseFunction& A, const nof::EntrySet& S) {
    const int n = A.side;
    std::vector<std::uint64_t> scope_cols(static_cast<std::size_t>(n), 0);
    for (const nof::Entry& e : S.entries())
        scope_cols[static_cast<std::size_t>(e.row)] |= std::uint64_t{1} << e.col;

    const auto constant_on = [&](std::uint64_t rows, std::uint64_t cols) {
        int value = -1;
        for (int r = 0; r < n; ++r) {
            if (!((rows >> r) & 1)) continue;
            std::uint64_t live = scope_cols[static_cast<std::size_t>(r)] & cols;
            while (live) {
                const int c = std::countr_zero(live);
                live &= live - 1;
                if (value < 0)
                    value = A.at(r, c);
                else if (A.at(r, c) != value)
                    return false;
            }
        }
        return true;
    };

    const auto solvable = [&](auto&& self, std::uint64_t rows, std::uint64_t cols,
                              int depth) -> bool {
        if (constant_on(rows, cols)) return true;
        if (depth == 0) return false;
        const std::uint64_t row_low = rows & (~rows + 1);
        for (std::uint64_t sub = (rows - 1) & rows; sub; sub = (sub - 1) & rows) {
            if (!(sub & row_low)) continue;
            if (self(self, sub, cols, depth - 1) && self(self, rows & ~sub, cols, depth - 1))
                return true;
        }
        const std::uint64_t col_low = cols & (~cols + 1);
        for (std::uint64_t sub = (cols - 1) & cols; sub; sub = (sub - 1) & cols) {
            if (!(sub & col_low)) continue;
            if (self(self, rows, sub, depth - 1) && self(self, rows, cols & ~sub, depth - 1))
                return true;
        }
        return false;
    };

    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (int depth = 0;; ++depth)
        if (solvable(solvable, full, full, depth)) return depth;
}

}  // namespace oracle
