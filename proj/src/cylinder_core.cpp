#include "nof/cylinder_core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace nof {

bool rect_contains(const Rectangle& r, Entry e) {
    if (e.row < 0 || e.row >= r.rows.universe() || e.col < 0 || e.col >= r.cols.universe())
        throw RangeError("entry outside the function grid");
    return r.rows.test(e.row) && r.cols.test(e.col);
}

MonoCheck mono_value_of(const BaseFunction& A, const EntrySet& S, const Rectangle& R) {
    if (A.dims != 2) throw DimensionError("monochromaticity is defined for dims == 2");
    if (S.side() != A.side || R.rows.universe() != A.side || R.cols.universe() != A.side)
        throw StructuralError("scope or rectangle does not match the function side");

    MonoCheck out;
    bool seen = false;
    Entry first{};
    for (int r : R.rows.indices()) {
        for (int c : R.cols.indices()) {
            const Entry e{r, c};
            if (!S.contains(e)) continue;
            const int v = A.at(r, c);
            if (!seen) {
                seen = true;
                first = e;
                out.value = v;
            } else if (v != out.value) {
                out.kind = MonoCheck::Kind::NotMonochromatic;
                out.witness_a = first;
                out.witness_b = e;
                out.value = -1;
                return out;
            }
        }
    }
    out.kind = seen ? MonoCheck::Kind::Monochromatic : MonoCheck::Kind::EmptyIntersection;
    return out;
}

void validate_cover(const BaseFunction& A, const MonoCover& cover) {
    if (A.dims != 2) throw DimensionError("covers are defined for dims == 2");
    if (cover.side != A.side || cover.scope.side() != A.side)
        throw StructuralError("cover side does not match the function");
    for (const CoverMember& m : cover.members) {
        if (m.rect.rows.none() || m.rect.cols.none())
            throw StructuralError("cover member with an empty row or column set");
        const MonoCheck chk = mono_value_of(A, cover.scope, m.rect);
        if (chk.kind == MonoCheck::Kind::NotMonochromatic)
            throw StructuralError("cover member is not monochromatic on the scope");
        if (chk.kind == MonoCheck::Kind::Monochromatic && chk.value != m.value)
            throw StructuralError("cover member value differs from the function on the scope");
    }
    for (const Entry& e : cover.scope.entries()) {
        bool covered = false;
        for (const CoverMember& m : cover.members)
            if (rect_contains(m.rect, e)) {
                covered = true;
                break;
            }
        if (!covered) {
            std::ostringstream msg;
            msg << "scope entry (" << e.row << ", " << e.col << ") is not covered";
            throw StructuralError(msg.str());
        }
    }
}

namespace {

// Search state for the exact minimum set cover over maximal monochromatic
// rectangles. Scope entries are indexed into a single 64-bit word, which
// bounds the exact machinery at side <= 8.
struct Candidate {
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    int value = 0;
    std::uint64_t covers = 0;  // bit per scope-entry index
};

struct CoverSearch {
    std::vector<Candidate> cands;
    std::vector<std::uint64_t> suffix_union;      // OR of covers[j], j >= i
    std::vector<int> entry_value;                 // per scope-entry index
    std::vector<std::vector<int>> cands_by_entry; // candidate indices covering each entry
    std::vector<int> branch_order;                // entries, fewest candidates first
    std::uint64_t all_mask = 0;
    std::uint64_t node_budget = 0;
    std::uint64_t nodes = 0;
    bool budget_hit = false;

    void prepare() {
        const std::size_t entries = entry_value.size();
        cands_by_entry.assign(entries, {});
        for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
            std::uint64_t u = cands[static_cast<std::size_t>(i)].covers;
            while (u) {
                const int e = std::countr_zero(u);
                u &= u - 1;
                cands_by_entry[static_cast<std::size_t>(e)].push_back(i);
            }
        }
        branch_order.resize(entries);
        for (std::size_t e = 0; e < entries; ++e) branch_order[e] = static_cast<int>(e);
        std::stable_sort(branch_order.begin(), branch_order.end(), [&](int a, int b) {
            return cands_by_entry[static_cast<std::size_t>(a)].size() <
                   cands_by_entry[static_cast<std::size_t>(b)].size();
        });
        suffix_union.assign(cands.size() + 1, 0);
        for (std::size_t i = cands.size(); i-- > 0;)
            suffix_union[i] = suffix_union[i + 1] | cands[i].covers;
    }

    bool spend() {
        if (++nodes > node_budget) {
            budget_hit = true;
            return false;
        }
        return true;
    }

    // Cheap bound: distinct values among uncovered entries; every member is
    // single-valued.
    int lower_bound_distinct(std::uint64_t uncovered) const {
        std::uint64_t seen = 0;
        int distinct = 0;
        std::uint64_t u = uncovered;
        while (u) {
            const int e = std::countr_zero(u);
            u &= u - 1;
            const std::uint64_t bit = std::uint64_t{1} << entry_value[e];
            if (!(seen & bit)) {
                seen |= bit;
                ++distinct;
            }
        }
        return distinct;
    }

    // Stronger bound: uncovered count over the best single candidate's
    // remaining coverage. Costs a candidate scan, so callers try the cheap
    // bound first.
    int lower_bound_volume(std::uint64_t uncovered) const {
        int best_gain = 1;
        for (const Candidate& c : cands)
            best_gain = std::max(best_gain, std::popcount(c.covers & uncovered));
        return (std::popcount(uncovered) + best_gain - 1) / best_gain;
    }

    bool prunes(std::uint64_t uncovered, std::size_t chosen, std::size_t allowance) const {
        if (chosen + static_cast<std::size_t>(lower_bound_distinct(uncovered)) > allowance)
            return true;
        return chosen + static_cast<std::size_t>(lower_bound_volume(uncovered)) > allowance;
    }

    // Phase 1: minimum cardinality, branching on the statically scarcest
    // uncovered entry.
    void find_min(std::uint64_t uncovered, std::vector<int>& chosen, std::vector<int>& best) {
        if (!spend()) return;
        if (!uncovered) {
            if (best.empty() || chosen.size() < best.size()) best = chosen;
            return;
        }
        if (!best.empty() && prunes(uncovered, chosen.size(), best.size() - 1)) return;

        int pick = -1;
        for (int e : branch_order)
            if ((uncovered >> e) & 1) {
                pick = e;
                break;
            }
        for (int i : cands_by_entry[static_cast<std::size_t>(pick)]) {
            chosen.push_back(i);
            find_min(uncovered & ~cands[static_cast<std::size_t>(i)].covers, chosen, best);
            chosen.pop_back();
            if (budget_hit) return;
        }
    }

    // Phase 2: lexicographically least cover of the known minimum size,
    // walking candidate indices in canonical order.
    bool find_lex(std::size_t start, std::uint64_t uncovered, std::size_t target,
                  std::vector<int>& chosen) {
        if (!spend()) return false;
        if (!uncovered) return true;
        if (chosen.size() >= target) return false;
        if (prunes(uncovered, chosen.size(), target)) return false;
        if (start >= cands.size() || (uncovered & ~suffix_union[start]) != 0) return false;
        for (std::size_t i = start; i < cands.size(); ++i) {
            if (!(cands[i].covers & uncovered)) continue;
            chosen.push_back(static_cast<int>(i));
            if (find_lex(i + 1, uncovered & ~cands[i].covers, target, chosen)) return true;
            chosen.pop_back();
            if (budget_hit) return false;
        }
        return false;
    }

    std::vector<int> greedy() const {
        std::vector<int> picked;
        std::uint64_t uncovered = all_mask;
        while (uncovered) {
            int best = -1, best_gain = 0;
            for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
                const int gain = std::popcount(cands[i].covers & uncovered);
                if (gain > best_gain) {
                    best_gain = gain;
                    best = i;
                }
            }
            picked.push_back(best);
            uncovered &= ~cands[best].covers;
        }
        std::sort(picked.begin(), picked.end());
        return picked;
    }
};

}  // namespace

CoverResult min_mono_cover(const BaseFunction& A, const EntrySet& S,
                           const CoverSearchLimits& limits) {
    if (A.dims != 2) throw DimensionError("covers are defined for dims == 2");
    if (S.side() != A.side) throw StructuralError("scope side does not match the function");
    if (A.side > 8) throw RangeError("exact covers support side <= 8");

    const int n = A.side;
    CoverResult result;
    result.cover.side = n;
    result.cover.scope = S;
    if (S.empty()) return result;  // vacuous cover, chi = 0

    const std::vector<Entry> scope_entries = S.entries();  // sorted row-major
    std::map<Entry, int> entry_index;
    for (int i = 0; i < static_cast<int>(scope_entries.size()); ++i)
        entry_index[scope_entries[i]] = i;

    std::set<int> values;
    for (const Entry& e : scope_entries) values.insert(A.at(e.row, e.col));

    // Maximal monochromatic rectangles arise as closures row-set -> allowed
    // columns -> allowed rows; every maximal one is the closure of its own
    // row set, so scanning all row subsets finds them all.
    const std::uint64_t full_rows = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::set<std::tuple<std::uint64_t, std::uint64_t, int>> seen;
    std::vector<Candidate> cands;
    for (int v : values) {
        // conflict[x] = columns whose scope entry in row x has a value != v
        std::vector<std::uint64_t> conflict(static_cast<std::size_t>(n), 0);
        std::vector<std::uint64_t> conflict_col(static_cast<std::size_t>(n), 0);
        for (const Entry& e : scope_entries)
            if (A.at(e.row, e.col) != v) {
                conflict[static_cast<std::size_t>(e.row)] |= std::uint64_t{1} << e.col;
                conflict_col[static_cast<std::size_t>(e.col)] |= std::uint64_t{1} << e.row;
            }
        for (std::uint64_t rs = 1; rs <= full_rows; ++rs) {
            std::uint64_t allowed_cols = full_rows;
            for (std::uint64_t r = rs; r;) {
                const int x = std::countr_zero(r);
                r &= r - 1;
                allowed_cols &= ~conflict[static_cast<std::size_t>(x)];
            }
            if (!allowed_cols) continue;
            std::uint64_t closed_rows = full_rows;
            for (std::uint64_t c = allowed_cols; c;) {
                const int y = std::countr_zero(c);
                c &= c - 1;
                closed_rows &= ~conflict_col[static_cast<std::size_t>(y)];
            }
            std::uint64_t covers = 0;
            for (const Entry& e : scope_entries)
                if (A.at(e.row, e.col) == v && ((closed_rows >> e.row) & 1) &&
                    ((allowed_cols >> e.col) & 1))
                    covers |= std::uint64_t{1} << entry_index[e];
            if (!covers) continue;
            if (seen.insert({closed_rows, allowed_cols, v}).second)
                cands.push_back({closed_rows, allowed_cols, v, covers});
        }
    }

    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.rows, a.cols, a.value) < std::tie(b.rows, b.cols, b.value);
    });

    CoverSearch search;
    search.cands = std::move(cands);
    search.node_budget = limits.node_budget;
    search.all_mask = scope_entries.size() == 64
                          ? ~std::uint64_t{0}
                          : (std::uint64_t{1} << scope_entries.size()) - 1;
    search.entry_value.resize(scope_entries.size());
    for (std::size_t i = 0; i < scope_entries.size(); ++i)
        search.entry_value[i] = A.at(scope_entries[i].row, scope_entries[i].col);
    search.prepare();

    std::vector<int> chosen;
    std::vector<int> best = search.greedy();
    search.find_min(search.all_mask, chosen, best);

    std::vector<int> canonical;
    if (!search.budget_hit) {
        chosen.clear();
        if (!search.find_lex(0, search.all_mask, best.size(), chosen) && !search.budget_hit)
            throw InternalInvariantError("lexicographic pass failed to rebuild the minimum cover");
        if (!search.budget_hit) canonical = chosen;
    }
    if (search.budget_hit) {
        canonical = search.greedy();
        result.exact = false;
    }

    result.nodes = search.nodes;
    for (int i : canonical) {
        const Candidate& c = search.cands[static_cast<std::size_t>(i)];
        result.cover.members.push_back(
            {Rectangle::from_masks(c.rows, c.cols, n), c.value});
    }
    std::sort(result.cover.members.begin(), result.cover.members.end(),
              [](const CoverMember& a, const CoverMember& b) { return (a <=> b) < 0; });
    validate_cover(A, result.cover);
    return result;
}

int cover_cc(const MonoCover& cover) {
    if (cover.members.empty()) {
        if (!cover.scope.empty())
            throw StructuralError("empty cover cannot serve a non-empty scope");
        return 0;
    }
    return ceil_log2(cover.members.size());
}

CoverProtocolRun simulate_cover_protocol(const BaseFunction& A, const EntrySet& S,
                                         const MonoCover& cover, Entry input) {
    if (!S.contains(input)) throw PreconditionError("protocol input must lie in the scope");
    validate_cover(A, cover);

    CoverProtocolRun run;
    const std::size_t chi = cover.members.size();
    run.membership.reserve(chi);
    for (const CoverMember& m : cover.members)
        run.membership.push_back(m.rect.cols.test(input.col) ? 1 : 0);

    std::size_t found = chi;
    for (std::size_t j = 0; j < chi; ++j) {
        if (run.membership[j] && cover.members[j].rect.rows.test(input.row)) {
            found = j;
            break;
        }
    }
    if (found == chi) throw StructuralError("no cover member contains the input");
    run.member_index = found;
    run.output = cover.members[found].value;
    if (run.output != A.at(input.row, input.col))
        throw StructuralError("cover member value differs from the function at the input");

    const int index_bits = ceil_log2(chi);
    run.transcript.reserve(chi + static_cast<std::size_t>(index_bits));
    for (std::uint8_t b : run.membership) run.transcript.push_back(b ? '1' : '0');
    for (int b = index_bits - 1; b >= 0; --b)
        run.transcript.push_back(((found >> b) & 1) ? '1' : '0');
    run.bit_cost = static_cast<int>(chi) + index_bits;
    return run;
}

std::int64_t det_sim_bound(int k, int c_n) {
    if (k < 2) throw RangeError("det_sim_bound needs k >= 2");
    if (c_n < 0 || c_n > 40) throw RangeError("c_n must lie in [0, 40]");
    return static_cast<std::int64_t>(k - 1) * (std::int64_t{1} << c_n) + c_n;
}

std::string serialize_cover(const MonoCover& cover) {
    if (cover.side > 64) throw RangeError("cover text format supports side <= 64");
    std::ostringstream out;
    out << "nofcover 1\n" << cover.side << ' ' << cover.members.size() << '\n';
    for (const CoverMember& m : cover.members)
        out << m.rect.rows.low_mask() << ' ' << m.rect.cols.low_mask() << ' ' << m.value << '\n';
    return out.str();
}

}  // namespace nof
