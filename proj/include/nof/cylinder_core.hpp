#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nof/bitset.hpp"
#include "nof/function_core.hpp"

namespace nof {

struct Entry {
    int row = 0;
    int col = 0;
    auto operator<=>(const Entry&) const = default;
};

/// Subset of the [side]^2 entry grid, index = row * side + col.
class EntrySet {
public:
    EntrySet() = default;
    explicit EntrySet(int side) : side_(side), bits_(side * side) {}

    static EntrySet full(int side) {
        EntrySet s(side);
        s.bits_ = Bitset::full(side * side);
        return s;
    }

    int side() const { return side_; }
    bool contains(Entry e) const { return bits_.test(index(e)); }
    void insert(Entry e) { bits_.set(index(e)); }
    void erase(Entry e) { bits_.reset(index(e)); }
    int count() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }

    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        out.reserve(static_cast<std::size_t>(bits_.count()));
        for (int i : bits_.indices()) out.push_back({i / side_, i % side_});
        return out;
    }

    friend bool operator==(const EntrySet&, const EntrySet&) = default;
    std::strong_ordering operator<=>(const EntrySet& o) const { return bits_ <=> o.bits_; }

private:
    int index(Entry e) const {
        if (e.row < 0 || e.row >= side_ || e.col < 0 || e.col >= side_)
            throw RangeError("entry outside the function grid");
        return e.row * side_ + e.col;
    }

    int side_ = 0;
    Bitset bits_;
};

/// Two-coordinate cylinder intersection: a row set crossed with a column set.
struct Rectangle {
    Bitset rows;
    Bitset cols;

    static Rectangle full(int side) { return {Bitset::full(side), Bitset::full(side)}; }
    static Rectangle from_masks(std::uint64_t row_mask, std::uint64_t col_mask, int side) {
        return {Bitset::from_mask(row_mask, side), Bitset::from_mask(col_mask, side)};
    }

    std::int64_t area() const {
        return static_cast<std::int64_t>(rows.count()) * cols.count();
    }

    friend bool operator==(const Rectangle&, const Rectangle&) = default;
    std::strong_ordering operator<=>(const Rectangle& o) const {
        if (auto c = rows <=> o.rows; c != 0) return c;
        return cols <=> o.cols;
    }
};

bool rect_contains(const Rectangle& r, Entry e);

struct MonoCheck {
    enum class Kind { Monochromatic, EmptyIntersection, NotMonochromatic };
    Kind kind = Kind::EmptyIntersection;
    int value = -1;                // Monochromatic only
    Entry witness_a, witness_b;    // NotMonochromatic only
};

/// Value of A on (R ∩ S) when constant; empty-intersection when R ∩ S = ∅;
/// otherwise a witness pair of differing entries.
MonoCheck mono_value_of(const BaseFunction& A, const EntrySet& S, const Rectangle& R);

struct CoverMember {
    Rectangle rect;
    int value = 0;
    friend bool operator==(const CoverMember&, const CoverMember&) = default;
    std::strong_ordering operator<=>(const CoverMember& o) const {
        if (auto c = rect <=> o.rect; c != 0) return c;
        return value <=> o.value;
    }
};

/// Cover of a scope S by rectangles that are each constant under A on S.
/// Members are kept in canonical (rows, cols, value) order.
struct MonoCover {
    int side = 0;
    EntrySet scope;
    std::vector<CoverMember> members;

    std::size_t chi() const { return members.size(); }
};

/// Throws StructuralError when a cover violates its invariants against A.
void validate_cover(const BaseFunction& A, const MonoCover& cover);

struct CoverSearchLimits {
    std::uint64_t node_budget = 20'000'000;
};

struct CoverResult {
    MonoCover cover;
    bool exact = true;  // false: budget exhausted, greedy cover returned
    std::uint64_t nodes = 0;
};

/// Minimum-cardinality monochromatic cover of S; exact via branch and bound
/// over maximal monochromatic rectangles, greedy fallback past the budget.
/// Among minimum covers the lexicographically least member list is returned.
CoverResult min_mono_cover(const BaseFunction& A, const EntrySet& S,
                           const CoverSearchLimits& limits = {});

/// ceil(log2 chi); 0 for a single member, and 0 for the vacuous empty-scope
/// cover. Empty cover with non-empty scope is structural nonsense.
int cover_cc(const MonoCover& cover);

struct CoverProtocolRun {
    std::vector<std::uint8_t> membership;  // one bit per member, cover order
    std::size_t member_index = 0;          // announced by the second player
    std::string transcript;                // membership bits then index bits
    int output = 0;
    int bit_cost = 0;
};

/// Two-player run over a cover: the player with the row on their forehead
/// writes the column-side membership vector, the other player announces the
/// first member containing the input. Cost chi + ceil(log2 chi).
CoverProtocolRun simulate_cover_protocol(const BaseFunction& A, const EntrySet& S,
                                         const MonoCover& cover, Entry input);

/// (k-1) * 2^c_n + c_n: deterministic cost of replaying a nondeterministic
/// cover of 2^c_n cylinder intersections with k players.
std::int64_t det_sim_bound(int k, int c_n);

/// Cover text format:
///   nofcover 1\n
///   side chi\n
///   rows-bitmask cols-bitmask value\n   (one line per member, canonical order)
/// Only defined for side <= 64.
std::string serialize_cover(const MonoCover& cover);

}  // namespace nof
