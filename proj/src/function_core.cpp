#include "nof/function_core.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nof/bitset.hpp"
#include "nof/prng.hpp"

namespace nof {

std::size_t BaseFunction::index_of(std::span<const int> coords) const {
    if (static_cast<int>(coords.size()) != dims)
        throw RangeError("coordinate tuple has wrong arity");
    std::size_t idx = 0;
    for (int c : coords) {
        if (c < 0 || c >= side) throw RangeError("coordinate out of range");
        idx = idx * side + static_cast<std::size_t>(c);
    }
    return idx;
}

void BaseFunction::validate() const {
    if (dims < 1 || side < 1 || colors < 1)
        throw StructuralError("base function needs dims >= 1, side >= 1, colors >= 1");
    std::size_t expect = 1;
    for (int i = 0; i < dims; ++i) expect *= static_cast<std::size_t>(side);
    if (values.size() != expect)
        throw StructuralError("value array length does not equal side^dims");
    for (std::int32_t v : values)
        if (v < 0 || v >= colors) throw StructuralError("value outside [0, colors)");
}

std::size_t memory_budget_bytes() {
    std::size_t mb = 512;
    if (const char* env = std::getenv("NOF_LIMIT_MB")) {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && parsed > 0) mb = static_cast<std::size_t>(parsed);
    }
    return mb * 1024 * 1024;
}

std::size_t checked_entry_count(int dims, int side, std::size_t bytes_per_entry) {
    if (dims < 1 || side < 1) throw RangeError("dims and side must be >= 1");
    const std::size_t budget = memory_budget_bytes();
    unsigned __int128 total = 1;
    for (int i = 0; i < dims; ++i) {
        total *= static_cast<unsigned>(side);
        if (total * bytes_per_entry > budget) {
            std::ostringstream msg;
            msg << "function with side^dims = " << side << "^" << dims
                << " entries exceeds the memory budget NOF_LIMIT_MB="
                << memory_budget_bytes() / (1024 * 1024);
            throw BudgetError(msg.str());
        }
    }
    return static_cast<std::size_t>(total);
}

BaseFunction gen_random(int dims, int side, int colors, std::uint64_t seed) {
    if (colors < 1) throw RangeError("colors must be >= 1");
    const std::size_t n = checked_entry_count(dims, side, sizeof(std::int32_t));
    BaseFunction A{dims, side, colors, {}};
    A.values.resize(n);
    Rng rng = seeded_rng(seed);
    for (std::size_t i = 0; i < n; ++i)
        A.values[i] =
            static_cast<std::int32_t>(uniform_below(rng, static_cast<std::uint64_t>(colors)));
    return A;
}

BaseFunction gen_latin(int side) {
    const std::size_t n = checked_entry_count(2, side, sizeof(std::int32_t));
    BaseFunction A{2, side, side, {}};
    A.values.resize(n);
    for (int x = 0; x < side; ++x)
        for (int y = 0; y < side; ++y)
            A.values[static_cast<std::size_t>(x) * side + y] = (x + y) % side;
    return A;
}

FieldMatrix FieldMatrix::zero(int q, int d) {
    return FieldMatrix{q, d, std::vector<std::int32_t>(static_cast<std::size_t>(d) * d, 0)};
}

FieldMatrix FieldMatrix::identity(int q, int d) {
    FieldMatrix m = zero(q, d);
    for (int i = 0; i < d; ++i) m.entries[static_cast<std::size_t>(i) * d + i] = 1 % q;
    return m;
}

FieldMatrix FieldMatrix::multiply(const FieldMatrix& o) const {
    if (order != o.order || dim != o.dim)
        throw StructuralError("matrix product needs matching field and dimension");
    FieldMatrix out = zero(order, dim);
    for (int r = 0; r < dim; ++r)
        for (int k = 0; k < dim; ++k) {
            const std::int64_t a = at(r, k);
            if (!a) continue;
            for (int c = 0; c < dim; ++c) {
                std::int64_t cell = out.at(r, c) + a * o.at(k, c);
                out.entries[static_cast<std::size_t>(r) * dim + c] =
                    static_cast<std::int32_t>(cell % order);
            }
        }
    return out;
}

std::int32_t FieldMatrix::trace() const {
    std::int64_t t = 0;
    for (int i = 0; i < dim; ++i) t += at(i, i);
    return static_cast<std::int32_t>(t % order);
}

void FieldMatrix::validate() const {
    if (!is_prime(order)) throw RangeError("field order must be prime");
    if (dim < 1) throw RangeError("matrix dimension must be >= 1");
    if (entries.size() != static_cast<std::size_t>(dim) * dim)
        throw StructuralError("matrix entry array has wrong length");
    for (std::int32_t e : entries)
        if (e < 0 || e >= order) throw StructuralError("matrix entry not reduced mod q");
}

bool is_prime(int q) {
    if (q < 2) return false;
    for (int p = 2; static_cast<std::int64_t>(p) * p <= q; ++p)
        if (q % p == 0) return false;
    return true;
}

FieldMatrix matrix_from_index(std::uint64_t index, int q, int d) {
    FieldMatrix m = FieldMatrix::zero(q, d);
    const int cells = d * d;
    for (int pos = cells - 1; pos >= 0; --pos) {
        m.entries[static_cast<std::size_t>(pos)] =
            static_cast<std::int32_t>(index % static_cast<std::uint64_t>(q));
        index /= static_cast<std::uint64_t>(q);
    }
    if (index != 0) throw RangeError("matrix index out of range for q^(d^2)");
    return m;
}

std::uint64_t index_of_matrix(const FieldMatrix& m) {
    std::uint64_t idx = 0;
    for (std::int32_t e : m.entries)
        idx = idx * static_cast<std::uint64_t>(m.order) + static_cast<std::uint64_t>(e);
    return idx;
}

BaseFunction gen_trace(int q, int d, int k) {
    if (!is_prime(q)) throw RangeError("field order q must be prime");
    if (d < 1 || k < 1) throw RangeError("d and k must be >= 1");
    std::uint64_t side64 = 1;
    for (int i = 0; i < d * d; ++i) {
        side64 *= static_cast<std::uint64_t>(q);
        if (side64 > (std::uint64_t{1} << 31)) throw BudgetError("q^(d^2) does not fit a coordinate");
    }
    const int side = static_cast<int>(side64);
    const std::size_t n = checked_entry_count(k, side, sizeof(std::int32_t));

    std::vector<FieldMatrix> atlas;
    atlas.reserve(static_cast<std::size_t>(side));
    for (int i = 0; i < side; ++i)
        atlas.push_back(matrix_from_index(static_cast<std::uint64_t>(i), q, d));

    BaseFunction A{k, side, q, {}};
    A.values.resize(n);
    std::vector<int> tuple(static_cast<std::size_t>(k), 0);
    for (std::size_t idx = 0; idx < n; ++idx) {
        FieldMatrix prod = atlas[static_cast<std::size_t>(tuple[0])];
        for (int i = 1; i < k; ++i) prod = prod.multiply(atlas[static_cast<std::size_t>(tuple[i])]);
        A.values[idx] = prod.trace();
        for (int i = k - 1; i >= 0; --i) {  // odometer, last coordinate fastest
            if (++tuple[i] < side) break;
            tuple[i] = 0;
        }
    }
    return A;
}

std::string_view lift_kind_name(LiftKind kind) {
    switch (kind) {
        case LiftKind::Unary: return "unary";
        case LiftKind::Binary: return "binary";
        case LiftKind::GreaterThan: return "gt";
    }
    throw InternalInvariantError("unknown lift kind");
}

BooleanFunction lift(const BaseFunction& A, LiftKind kind) {
    A.validate();
    int last_dim = A.colors;
    if (kind == LiftKind::Binary) {
        if (A.colors < 2) throw RangeError("binary lift needs colors >= 2");
        last_dim = ceil_log2(static_cast<std::uint64_t>(A.colors));
    }
    const std::size_t tuples = A.entry_count();
    if (tuples * static_cast<std::size_t>(last_dim) > memory_budget_bytes())
        throw BudgetError("lifted bit table exceeds the memory budget NOF_LIMIT_MB");

    BooleanFunction f;
    f.kind = kind;
    f.dims = A.dims;
    f.side = A.side;
    f.colors = A.colors;
    f.last_dim = last_dim;
    f.bits.assign(tuples * static_cast<std::size_t>(last_dim), 0);
    for (std::size_t t = 0; t < tuples; ++t) {
        const std::int32_t v = A.values[t];
        std::uint8_t* fib = f.bits.data() + t * static_cast<std::size_t>(last_dim);
        switch (kind) {
            case LiftKind::Unary:
                fib[v] = 1;
                break;
            case LiftKind::Binary:
                for (int i = 0; i < last_dim; ++i) fib[i] = static_cast<std::uint8_t>((v >> i) & 1);
                break;
            case LiftKind::GreaterThan:
                for (int y = 0; y <= v; ++y) fib[y] = 1;
                break;
        }
    }
    return f;
}

namespace {

[[noreturn]] void bad_fiber(LiftKind kind, std::size_t tuple, const char* why) {
    std::ostringstream msg;
    msg << lift_kind_name(kind) << " fiber at tuple index " << tuple << " is malformed: " << why;
    throw StructuralError(msg.str());
}

}  // namespace

BaseFunction base_of(const BooleanFunction& f) {
    if (f.dims < 1 || f.side < 1 || f.colors < 1 || f.last_dim < 1)
        throw StructuralError("boolean function header fields must be >= 1");
    const std::size_t tuples = f.tuple_count();
    if (f.bits.size() != tuples * static_cast<std::size_t>(f.last_dim))
        throw StructuralError("bit table length does not match tuple count");

    BaseFunction A{f.dims, f.side, f.colors, {}};
    A.values.resize(tuples);
    for (std::size_t t = 0; t < tuples; ++t) {
        const auto fib = f.fiber(t);
        std::int32_t v = 0;
        switch (f.kind) {
            case LiftKind::Unary: {
                int ones = 0;
                for (int y = 0; y < f.last_dim; ++y)
                    if (fib[y]) {
                        ++ones;
                        v = y;
                    }
                if (ones != 1) bad_fiber(f.kind, t, "must contain exactly one 1");
                break;
            }
            case LiftKind::Binary: {
                for (int i = 0; i < f.last_dim; ++i)
                    if (fib[i]) v |= 1 << i;
                if (v >= f.colors) bad_fiber(f.kind, t, "decoded value is >= colors");
                break;
            }
            case LiftKind::GreaterThan: {
                int ones = 0;
                while (ones < f.last_dim && fib[ones]) ++ones;
                for (int y = ones; y < f.last_dim; ++y)
                    if (fib[y]) bad_fiber(f.kind, t, "must be a prefix of ones");
                if (ones == 0) bad_fiber(f.kind, t, "value >= 0 forces f(x, 0) = 1");
                v = ones - 1;
                break;
            }
        }
        A.values[t] = v;
    }
    A.validate();
    return A;
}

namespace {

// Strict split on single spaces: no empty tokens, no leading/trailing space.
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t sp = line.find(' ', start);
        const std::string_view tok =
            sp == std::string_view::npos ? line.substr(start) : line.substr(start, sp - start);
        if (tok.empty()) throw ParseError("malformed whitespace in function file");
        out.push_back(tok);
        if (sp == std::string_view::npos) break;
        start = sp + 1;
    }
    return out;
}

std::int64_t parse_decimal(std::string_view tok) {
    if (tok.empty() || tok.size() > 18) throw ParseError("malformed decimal token");
    std::int64_t v = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9') throw ParseError("malformed decimal token");
        v = v * 10 + (ch - '0');
    }
    return v;
}

}  // namespace

std::string serialize(const BaseFunction& A) {
    A.validate();
    std::ostringstream out;
    out << "noffn 1\n" << A.dims << ' ' << A.side << ' ' << A.colors << '\n';
    for (std::size_t i = 0; i < A.values.size(); ++i) {
        if (i) out << ' ';
        out << A.values[i];
    }
    out << '\n';
    return out.str();
}

BaseFunction parse(std::string_view text) {
    if (text.empty() || text.back() != '\n')
        throw ParseError("function file must end with a newline");
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
    if (lines.size() != 3) throw ParseError("function file must have exactly three lines");
    if (lines[0] != "noffn 1") throw MagicError("expected magic line 'noffn 1'");

    const auto header = split_fields(lines[1]);
    if (header.size() != 3) throw ParseError("header line must hold dims side colors");
    const std::int64_t dims = parse_decimal(header[0]);
    const std::int64_t side = parse_decimal(header[1]);
    const std::int64_t colors = parse_decimal(header[2]);
    if (dims < 1 || side < 1 || colors < 1)
        throw ValueRangeError("dims, side and colors must be >= 1");

    const std::size_t expect =
        checked_entry_count(static_cast<int>(dims), static_cast<int>(side), sizeof(std::int32_t));
    const auto tokens = split_fields(lines[2]);
    if (tokens.size() != expect) throw LengthError("value count does not match side^dims");

    BaseFunction A{static_cast<int>(dims), static_cast<int>(side), static_cast<int>(colors), {}};
    A.values.reserve(expect);
    for (auto tok : tokens) {
        const std::int64_t v = parse_decimal(tok);
        if (v >= colors) throw ValueRangeError("value outside [0, colors)");
        A.values.push_back(static_cast<std::int32_t>(v));
    }
    return A;
}

BaseFunction load_function(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open function file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void save_function(const BaseFunction& A, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write function file: " + path);
    out << serialize(A);
}

}  // namespace nof
