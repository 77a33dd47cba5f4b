#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <vector>

#include "nof/errors.hpp"

namespace nof {

/// Subset of [0, universe), packed 64 indices per word. Comparisons treat the
/// set as the integer with bit i weighted 2^i, which gives every canonical
/// tie-break in the workbench a single reproducible order.
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(int universe) : universe_(universe), words_((universe + 63) / 64, 0) {
        if (universe < 0) throw RangeError("bitset universe must be non-negative");
    }

    static Bitset full(int universe) {
        Bitset b(universe);
        for (int i = 0; i < universe; ++i) b.set(i);
        return b;
    }

    // universe <= 64 convenience for the micro-scale search code.
    static Bitset from_mask(std::uint64_t mask, int universe) {
        Bitset b(universe);
        if (universe > 0) b.words_[0] = universe == 64 ? mask : (mask & ((std::uint64_t{1} << universe) - 1));
        return b;
    }

    int universe() const { return universe_; }

    bool test(int i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    void set(int i) {
        check_index(i);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(int i) {
        check_index(i);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    int count() const {
        int c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    bool any() const {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    std::uint64_t low_mask() const { return words_.empty() ? 0 : words_[0]; }

    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count()));
        for (int w = 0; w < static_cast<int>(words_.size()); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                out.push_back(w * 64 + b);
                bits &= bits - 1;
            }
        }
        return out;
    }

    friend bool operator==(const Bitset& a, const Bitset& b) = default;

    std::strong_ordering operator<=>(const Bitset& o) const {
        if (universe_ != o.universe_) return universe_ <=> o.universe_;
        for (std::size_t w = words_.size(); w-- > 0;) {
            if (words_[w] != o.words_[w]) return words_[w] <=> o.words_[w];
        }
        return std::strong_ordering::equal;
    }

private:
    void check_index(int i) const {
        if (i < 0 || i >= universe_) throw RangeError("bitset index out of range");
    }

    int universe_ = 0;
    std::vector<std::uint64_t> words_;
};

/// ceil(log2(x)) for x >= 1; the bit count of an index into x alternatives.
inline int ceil_log2(std::uint64_t x) {
    if (x == 0) throw RangeError("ceil_log2 of zero");
    int bits = 0;
    while ((std::uint64_t{1} << bits) < x) ++bits;
    return bits;
}

}  // namespace nof
