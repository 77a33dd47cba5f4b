#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "nof/errors.hpp"

namespace nof {

/// Exact rational number over int64, always reduced, denominator > 0.
/// All quantities in this workbench are counts over micro instances, so the
/// magnitudes stay far below the int64 range.
class Rational {
public:
    constexpr Rational() = default;

    Rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw RangeError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        num_ = g ? num / g : num;
        den_ = g ? den / g : den;
    }

    static Rational integer(std::int64_t v) { return Rational(v, 1); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double as_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend bool operator==(const Rational& a, const Rational& b) = default;

    std::strong_ordering operator<=>(const Rational& o) const {
        return num_ * o.den_ <=> o.num_ * den_;
    }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Rational operator*(const Rational& o) const { return Rational(num_ * o.num_, den_ * o.den_); }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw RangeError("rational division by zero");
        return Rational(num_ * o.den_, den_ * o.num_);
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace nof
