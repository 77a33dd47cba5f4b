#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nof/cylinder_core.hpp"
#include "nof/function_core.hpp"
#include "nof/rational.hpp"

namespace nof {

/// Triple (x,y), (x',y), (x,y') with A(x',y) = A(x,y') = shared_value and
/// A(x,y) = base_value != shared_value.
struct Star {
    Entry base;         // (x, y)
    Entry row_partner;  // (x', y): same column, different row
    Entry col_partner;  // (x, y'): same row, different column
    int shared_value = 0;
    int base_value = 0;
    friend bool operator==(const Star&, const Star&) = default;
};

/// Visits every star in lexicographic (x, y, x', y') order; stop by returning
/// false from the callback.
template <class Fn>
void for_each_star(const BaseFunction& A, Fn&& fn) {
    if (A.dims != 2) throw DimensionError("stars are defined for dims == 2");
    const int n = A.side;
    // cols_with[x][z]: sorted columns y' with A(x, y') == z.
    std::vector<std::vector<std::vector<int>>> cols_with(
        static_cast<std::size_t>(n), std::vector<std::vector<int>>(static_cast<std::size_t>(A.colors)));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            cols_with[static_cast<std::size_t>(x)][static_cast<std::size_t>(A.at(x, y))].push_back(y);

    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int base_value = A.at(x, y);
            for (int xp = 0; xp < n; ++xp) {
                if (xp == x) continue;
                const int z = A.at(xp, y);
                if (z == base_value) continue;
                for (int yp : cols_with[static_cast<std::size_t>(x)][static_cast<std::size_t>(z)]) {
                    if (yp == y) continue;
                    if (!fn(Star{{x, y}, {xp, y}, {x, yp}, z, base_value})) return;
                }
            }
        }
}

std::vector<Star> enumerate_stars(const BaseFunction& A);

/// Entry coloring of a dims == 2 function.
struct Coloring {
    int side = 0;
    int colors_used = 0;
    std::vector<std::int32_t> assignment;  // row-major, entries in [0, colors_used)

    int at(int row, int col) const {
        return assignment[static_cast<std::size_t>(row) * side + col];
    }
    void validate() const;

    friend bool operator==(const Coloring&, const Coloring&) = default;
};

/// nullopt when no star is monochromatic, otherwise the lexicographically
/// first monochromatic star.
std::optional<Star> verify_star_free(const BaseFunction& A, const Coloring& coloring);

/// Row-major greedy: each entry takes the smallest color that leaves every
/// fully-colored star polychromatic. Star-free by construction and verified.
Coloring color_greedy(const BaseFunction& A);

struct ChiStarLimits {
    int max_colors = 4;
    std::uint64_t node_budget = 50'000'000;
};

struct ChiStarResult {
    std::optional<int> colors;           // minimum star-free color count
    std::optional<Coloring> witness;     // lexicographically least optimum
    bool exceeded = false;               // color limit or node budget hit
    std::uint64_t nodes = 0;
};

/// Exact minimum star-free color count by branch and bound: satisfiability
/// pass over entries in decreasing star-degree order with color-symmetry
/// pruning, then a row-major pass for the lexicographically least witness.
ChiStarResult chi_star_exact(const BaseFunction& A, const ChiStarLimits& limits = {});

struct PeelIteration {
    Rectangle scope;                      // E at the start of the iteration
    int value = 0;                        // v
    int color = 0;                        // c
    std::vector<Entry> chosen;            // S, row-major order
    Rectangle enclosure;                  // minimal rectangle around S
    std::vector<int> used_values_before;  // V, ascending
    Rational coverage_ratio;              // |S| * colors * colors_used / |E|
};

struct PeelingTrace {
    std::vector<PeelIteration> iterations;
    std::size_t iteration_count() const { return iterations.size(); }
};

/// Iteratively extracts the most frequent fresh value and its most abundant
/// color inside a shrinking enclosing rectangle; ties break to the smallest
/// value, then the smallest color. Requires a star-free coloring.
PeelingTrace peel(const BaseFunction& A, const Coloring& coloring);

/// Coloring text format:
///   nofcol 1\n
///   side colors_used\n
///   side^2 color indices, row-major\n
std::string serialize_coloring(const Coloring& c);
Coloring parse_coloring(std::string_view text);
Coloring load_coloring(const std::string& path);
void save_coloring(const Coloring& c, const std::string& path);

}  // namespace nof
