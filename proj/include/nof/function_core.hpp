#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nof/errors.hpp"

namespace nof {

/// Dense map [side]^dims -> [colors). Values are stored 0-based, row-major
/// with the last coordinate fastest.
struct BaseFunction {
    int dims = 0;
    int side = 0;
    int colors = 0;
    std::vector<std::int32_t> values;

    std::size_t entry_count() const { return values.size(); }

    std::size_t index_of(std::span<const int> coords) const;
    std::int32_t at(std::span<const int> coords) const { return values[index_of(coords)]; }

    // dims == 2 convenience.
    std::int32_t at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * side + col];
    }

    void validate() const;  // throws StructuralError on any invariant violation

    friend bool operator==(const BaseFunction&, const BaseFunction&) = default;
};

/// Memory budget in bytes, from NOF_LIMIT_MB (default 512).
std::size_t memory_budget_bytes();

/// side^dims, rejected with BudgetError when bytes_per_entry * side^dims
/// exceeds the budget.
std::size_t checked_entry_count(int dims, int side, std::size_t bytes_per_entry);

/// Uniform i.i.d. values from a seeded deterministic generator.
BaseFunction gen_random(int dims, int side, int colors, std::uint64_t seed);

/// Cyclic Latin square: value(x, y) = (x + y) mod side, colors = side.
BaseFunction gen_latin(int side);

/// d x d matrix over the prime field F_q.
struct FieldMatrix {
    int order = 0;  // prime q
    int dim = 0;
    std::vector<std::int32_t> entries;  // row-major, reduced mod order

    static FieldMatrix zero(int q, int d);
    static FieldMatrix identity(int q, int d);

    std::int32_t at(int r, int c) const { return entries[static_cast<std::size_t>(r) * dim + c]; }
    FieldMatrix multiply(const FieldMatrix& o) const;
    std::int32_t trace() const;

    void validate() const;

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;
};

bool is_prime(int q);

/// Coordinate index <-> matrix bijection: base-q digits in row-major entry
/// order, most significant digit = entry (0,0).
FieldMatrix matrix_from_index(std::uint64_t index, int q, int d);
std::uint64_t index_of_matrix(const FieldMatrix& m);

/// dims = k, side = q^(d^2), colors = q; value = trace of the product of the
/// k matrices encoded by the coordinates, mod q.
BaseFunction gen_trace(int q, int d, int k);

enum class LiftKind { Unary, Binary, GreaterThan };

std::string_view lift_kind_name(LiftKind kind);

/// Boolean function over [side]^dims x [last_dim) obtained by re-encoding the
/// value of a base function along one extra coordinate. The bit table is
/// explicit so that malformed fibers can be represented and rejected.
struct BooleanFunction {
    LiftKind kind = LiftKind::Unary;
    int dims = 0;
    int side = 0;
    int colors = 0;    // colors of the intended base function
    int last_dim = 0;  // Unary/GreaterThan: colors; Binary: ceil(log2 colors)
    std::vector<std::uint8_t> bits;  // [tuple][y], tuple-major

    std::size_t tuple_count() const { return last_dim ? bits.size() / last_dim : 0; }

    std::uint8_t eval(std::size_t tuple_index, int y) const {
        return bits[tuple_index * last_dim + y];
    }

    std::span<const std::uint8_t> fiber(std::size_t tuple_index) const {
        return {bits.data() + tuple_index * last_dim, static_cast<std::size_t>(last_dim)};
    }
};

/// Unary: indicator of the value. Binary: value bits, least significant
/// first. GreaterThan: f(x, y) = 1 iff value(x) >= y, so each fiber is a
/// prefix of ones.
BooleanFunction lift(const BaseFunction& A, LiftKind kind);

/// Inverse of lift; rejects fibers that violate the invariant of the lift
/// kind, naming the offending tuple.
BaseFunction base_of(const BooleanFunction& f);

/// Text format, bit-exact:
///   noffn 1\n
///   dims side colors\n
///   values space-separated, row-major, last coordinate fastest\n
std::string serialize(const BaseFunction& A);
BaseFunction parse(std::string_view text);

BaseFunction load_function(const std::string& path);
void save_function(const BaseFunction& A, const std::string& path);

}  // namespace nof
