#include "nof/star_analysis.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nof {

std::vector<Star> enumerate_stars(const BaseFunction& A) {
    std::vector<Star> out;
    for_each_star(A, [&](const Star& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

void Coloring::validate() const {
    if (side < 1 || colors_used < 1) throw StructuralError("coloring needs side >= 1, colors >= 1");
    if (assignment.size() != static_cast<std::size_t>(side) * side)
        throw StructuralError("coloring assignment length must be side^2");
    for (std::int32_t c : assignment)
        if (c < 0 || c >= colors_used) throw StructuralError("color index outside [0, colors_used)");
}

std::optional<Star> verify_star_free(const BaseFunction& A, const Coloring& coloring) {
    coloring.validate();
    if (A.dims != 2 || coloring.side != A.side)
        throw StructuralError("coloring dimensions do not match the function");
    std::optional<Star> violation;
    for_each_star(A, [&](const Star& s) {
        const int c = coloring.at(s.base.row, s.base.col);
        if (coloring.at(s.row_partner.row, s.row_partner.col) == c &&
            coloring.at(s.col_partner.row, s.col_partner.col) == c) {
            violation = s;
            return false;
        }
        return true;
    });
    return violation;
}

namespace {

// Stars regrouped by the last of their three entries in a given entry order,
// so a backtracking pass only ever checks fully-colored stars.
struct StarConstraints {
    // per position: list of (other_a, other_b) positions
    std::vector<std::vector<std::pair<int, int>>> by_last;
    std::vector<int> degree;  // star-degree per entry index

    StarConstraints(const BaseFunction& A, const std::vector<int>& entry_to_pos) {
        const int n = A.side;
        by_last.resize(static_cast<std::size_t>(n) * n);
        degree.assign(static_cast<std::size_t>(n) * n, 0);
        for_each_star(A, [&](const Star& s) {
            const int e0 = s.base.row * n + s.base.col;
            const int e1 = s.row_partner.row * n + s.row_partner.col;
            const int e2 = s.col_partner.row * n + s.col_partner.col;
            ++degree[static_cast<std::size_t>(e0)];
            ++degree[static_cast<std::size_t>(e1)];
            ++degree[static_cast<std::size_t>(e2)];
            int p0 = entry_to_pos[static_cast<std::size_t>(e0)];
            int p1 = entry_to_pos[static_cast<std::size_t>(e1)];
            int p2 = entry_to_pos[static_cast<std::size_t>(e2)];
            if (p0 > p1) std::swap(p0, p1);
            if (p1 > p2) std::swap(p1, p2);
            if (p0 > p1) std::swap(p0, p1);
            by_last[static_cast<std::size_t>(p2)].push_back({p0, p1});
            return true;
        });
    }
};

}  // namespace

Coloring color_greedy(const BaseFunction& A) {
    if (A.dims != 2) throw DimensionError("colorings are defined for dims == 2");
    const int n = A.side;
    std::vector<int> identity(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n * n; ++i) identity[static_cast<std::size_t>(i)] = i;
    StarConstraints cons(A, identity);

    std::vector<std::int32_t> color(static_cast<std::size_t>(n) * n, -1);
    int used = 0;
    for (int e = 0; e < n * n; ++e) {
        int c = 0;
        for (;; ++c) {
            bool ok = true;
            for (const auto& [a, b] : cons.by_last[static_cast<std::size_t>(e)]) {
                if (color[static_cast<std::size_t>(a)] == c &&
                    color[static_cast<std::size_t>(b)] == c) {
                    ok = false;
                    break;
                }
            }
            if (ok) break;
        }
        color[static_cast<std::size_t>(e)] = c;
        used = std::max(used, c + 1);
    }
    Coloring out{n, used, std::move(color)};
    if (verify_star_free(A, out))
        throw InternalInvariantError("greedy coloring produced a monochromatic star");
    return out;
}

namespace {

// Backtracking satisfiability for a fixed color count over a fixed entry
// order; new colors are introduced smallest-first so color relabelings are
// explored once.
struct ChiSearch {
    const StarConstraints& cons;
    int total;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool budget_hit = false;
    std::vector<std::int32_t> color;

    ChiSearch(const StarConstraints& c, int entries, std::uint64_t node_budget)
        : cons(c), total(entries), budget(node_budget),
          color(static_cast<std::size_t>(entries), -1) {}

    bool conflict(int pos, int c) const {
        for (const auto& [a, b] : cons.by_last[static_cast<std::size_t>(pos)])
            if (color[static_cast<std::size_t>(a)] == c && color[static_cast<std::size_t>(b)] == c)
                return true;
        return false;
    }

    bool sat(int pos, int used, int limit, bool symmetry) {
        if (pos == total) return true;
        if (++nodes > budget) {
            budget_hit = true;
            return false;
        }
        const int top = symmetry ? std::min(used + 1, limit) : limit;
        for (int c = 0; c < top; ++c) {
            if (conflict(pos, c)) continue;
            color[static_cast<std::size_t>(pos)] = c;
            if (sat(pos + 1, std::max(used, c + 1), limit, symmetry)) return true;
            color[static_cast<std::size_t>(pos)] = -1;
            if (budget_hit) return false;
        }
        return false;
    }
};

}  // namespace

ChiStarResult chi_star_exact(const BaseFunction& A, const ChiStarLimits& limits) {
    if (A.dims != 2) throw DimensionError("colorings are defined for dims == 2");
    const int n = A.side;
    const int entries = n * n;

    // Satisfiability order: decreasing star-degree, ties to the smaller index.
    std::vector<int> identity(static_cast<std::size_t>(entries));
    for (int i = 0; i < entries; ++i) identity[static_cast<std::size_t>(i)] = i;
    StarConstraints row_major(A, identity);

    std::vector<int> order(identity);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return row_major.degree[static_cast<std::size_t>(a)] >
               row_major.degree[static_cast<std::size_t>(b)];
    });
    std::vector<int> entry_to_pos(static_cast<std::size_t>(entries));
    for (int p = 0; p < entries; ++p) entry_to_pos[static_cast<std::size_t>(order[p])] = p;
    StarConstraints by_degree(A, entry_to_pos);

    ChiStarResult result;
    std::uint64_t nodes = 0;
    for (int limit = 1; limit <= limits.max_colors; ++limit) {
        ChiSearch search(by_degree, entries, limits.node_budget - std::min(limits.node_budget, nodes));
        const bool ok = search.sat(0, 0, limit, /*symmetry=*/true);
        nodes += search.nodes;
        if (search.budget_hit) {
            result.exceeded = true;
            result.nodes = nodes;
            return result;
        }
        if (!ok) continue;

        // Witness pass: row-major entries, ascending colors; the first valid
        // full assignment is the lexicographically least one.
        ChiSearch lex(row_major, entries, limits.node_budget - std::min(limits.node_budget, nodes));
        if (!lex.sat(0, 0, limit, /*symmetry=*/false)) {
            nodes += lex.nodes;
            if (!lex.budget_hit)
                throw InternalInvariantError("witness pass lost a coloring the search found");
            result.exceeded = true;  // node budget; satisfiability is established
            result.nodes = nodes;
            return result;
        }
        nodes += lex.nodes;
        result.colors = limit;
        result.witness = Coloring{n, limit, lex.color};
        result.nodes = nodes;
        if (verify_star_free(A, *result.witness))
            throw InternalInvariantError("exact coloring witness has a monochromatic star");
        return result;
    }
    result.exceeded = true;  // no star-free coloring within the color limit
    result.nodes = nodes;
    return result;
}

PeelingTrace peel(const BaseFunction& A, const Coloring& coloring) {
    if (A.dims != 2) throw DimensionError("peeling is defined for dims == 2");
    if (A.side > 64) throw RangeError("peeling supports side <= 64");
    if (const auto star = verify_star_free(A, coloring)) {
        std::ostringstream msg;
        msg << "coloring is not star-free: monochromatic star based at (" << star->base.row
            << ", " << star->base.col << ")";
        throw PreconditionError(msg.str());
    }

    const int n = A.side;
    const int N = A.colors;
    const int L = coloring.colors_used;
    std::uint64_t row_mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::uint64_t col_mask = row_mask;
    std::vector<bool> used_value(static_cast<std::size_t>(N), false);
    std::vector<int> used_colors;

    PeelingTrace trace;
    for (;;) {
        // Most frequent fresh value inside E, ties to the smallest value.
        std::vector<std::int64_t> freq(static_cast<std::size_t>(N), 0);
        for (std::uint64_t r = row_mask; r;) {
            const int x = std::countr_zero(r);
            r &= r - 1;
            for (std::uint64_t c = col_mask; c;) {
                const int y = std::countr_zero(c);
                c &= c - 1;
                ++freq[static_cast<std::size_t>(A.at(x, y))];
            }
        }
        int v = -1;
        for (int cand = 0; cand < N; ++cand)
            if (!used_value[static_cast<std::size_t>(cand)] && freq[static_cast<std::size_t>(cand)] > 0 &&
                (v < 0 || freq[static_cast<std::size_t>(cand)] > freq[static_cast<std::size_t>(v)]))
                v = cand;
        if (v < 0) break;

        // Most abundant color among E's v-entries, ties to the smallest color.
        std::vector<std::int64_t> color_freq(static_cast<std::size_t>(L), 0);
        for (std::uint64_t r = row_mask; r;) {
            const int x = std::countr_zero(r);
            r &= r - 1;
            for (std::uint64_t c = col_mask; c;) {
                const int y = std::countr_zero(c);
                c &= c - 1;
                if (A.at(x, y) == v) ++color_freq[static_cast<std::size_t>(coloring.at(x, y))];
            }
        }
        int chosen_color = -1;
        for (int cand = 0; cand < L; ++cand)
            if (color_freq[static_cast<std::size_t>(cand)] > 0 &&
                (chosen_color < 0 ||
                 color_freq[static_cast<std::size_t>(cand)] > color_freq[static_cast<std::size_t>(chosen_color)]))
                chosen_color = cand;

        PeelIteration it;
        it.scope = Rectangle::from_masks(row_mask, col_mask, n);
        it.value = v;
        it.color = chosen_color;
        for (int x = 0; x < N; ++x)
            if (used_value[static_cast<std::size_t>(x)]) it.used_values_before.push_back(x);

        std::uint64_t s_rows = 0, s_cols = 0;
        for (std::uint64_t r = row_mask; r;) {
            const int x = std::countr_zero(r);
            r &= r - 1;
            for (std::uint64_t c = col_mask; c;) {
                const int y = std::countr_zero(c);
                c &= c - 1;
                if (A.at(x, y) == v && coloring.at(x, y) == chosen_color) {
                    it.chosen.push_back({x, y});
                    s_rows |= std::uint64_t{1} << x;
                    s_cols |= std::uint64_t{1} << y;
                }
            }
        }
        it.enclosure = Rectangle::from_masks(s_rows, s_cols, n);

        const std::size_t iter_no = trace.iterations.size() + 1;
        // Entries of the enclosing rectangle outside S must avoid the chosen
        // color; a hit would mean a monochromatic star.
        for (std::uint64_t r = s_rows; r;) {
            const int x = std::countr_zero(r);
            r &= r - 1;
            for (std::uint64_t c = s_cols; c;) {
                const int y = std::countr_zero(c);
                c &= c - 1;
                const bool in_s = A.at(x, y) == v && coloring.at(x, y) == chosen_color &&
                                  ((row_mask >> x) & 1) && ((col_mask >> y) & 1);
                if (!in_s && coloring.at(x, y) == chosen_color) {
                    std::ostringstream msg;
                    msg << "iteration " << iter_no
                        << ": enclosure entry outside S carries the chosen color";
                    throw InternalInvariantError(msg.str());
                }
            }
        }
        if (std::find(used_colors.begin(), used_colors.end(), chosen_color) != used_colors.end()) {
            std::ostringstream msg;
            msg << "iteration " << iter_no << ": chosen color repeats an earlier iteration";
            throw InternalInvariantError(msg.str());
        }

        const std::int64_t e_size =
            static_cast<std::int64_t>(std::popcount(row_mask)) * std::popcount(col_mask);
        it.coverage_ratio =
            Rational(static_cast<std::int64_t>(it.chosen.size()) * N * L, e_size);
        trace.iterations.push_back(std::move(it));

        used_colors.push_back(chosen_color);
        used_value[static_cast<std::size_t>(v)] = true;
        row_mask = s_rows;
        col_mask = s_cols;
    }

    if (trace.iterations.size() > static_cast<std::size_t>(L))
        throw InternalInvariantError("peeling ran more iterations than colors");
    return trace;
}

std::string serialize_coloring(const Coloring& c) {
    c.validate();
    std::ostringstream out;
    out << "nofcol 1\n" << c.side << ' ' << c.colors_used << '\n';
    for (std::size_t i = 0; i < c.assignment.size(); ++i) {
        if (i) out << ' ';
        out << c.assignment[i];
    }
    out << '\n';
    return out.str();
}

namespace {

std::vector<std::string_view> split_lines_strict(std::string_view text, const char* what) {
    if (text.empty() || text.back() != '\n')
        throw ParseError(std::string(what) + " file must end with a newline");
    text.remove_suffix(1);
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (true) {
        const std::size_t nl = text.find('\n', start);
        lines.push_back(nl == std::string_view::npos ? text.substr(start)
                                                     : text.substr(start, nl - start));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return lines;
}

std::vector<std::int64_t> parse_decimal_fields(std::string_view line) {
    std::vector<std::int64_t> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t sp = line.find(' ', start);
        const std::string_view tok =
            sp == std::string_view::npos ? line.substr(start) : line.substr(start, sp - start);
        if (tok.empty() || tok.size() > 18) throw ParseError("malformed decimal token");
        std::int64_t v = 0;
        for (char ch : tok) {
            if (ch < '0' || ch > '9') throw ParseError("malformed decimal token");
            v = v * 10 + (ch - '0');
        }
        out.push_back(v);
        if (sp == std::string_view::npos) break;
        start = sp + 1;
    }
    return out;
}

}  // namespace

Coloring parse_coloring(std::string_view text) {
    const auto lines = split_lines_strict(text, "coloring");
    if (lines.size() != 3) throw ParseError("coloring file must have exactly three lines");
    if (lines[0] != "nofcol 1") throw MagicError("expected magic line 'nofcol 1'");
    const auto header = parse_decimal_fields(lines[1]);
    if (header.size() != 2) throw ParseError("header line must hold side colors_used");
    const std::int64_t side = header[0], used = header[1];
    if (side < 1 || used < 1) throw ValueRangeError("side and colors_used must be >= 1");
    const auto vals = parse_decimal_fields(lines[2]);
    if (vals.size() != static_cast<std::size_t>(side * side))
        throw LengthError("color count does not match side^2");
    Coloring c{static_cast<int>(side), static_cast<int>(used), {}};
    c.assignment.reserve(vals.size());
    for (std::int64_t v : vals) {
        if (v >= used) throw ValueRangeError("color index outside [0, colors_used)");
        c.assignment.push_back(static_cast<std::int32_t>(v));
    }
    return c;
}

Coloring load_coloring(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open coloring file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_coloring(buf.str());
}

void save_coloring(const Coloring& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write coloring file: " + path);
    out << serialize_coloring(c);
}

}  // namespace nof
