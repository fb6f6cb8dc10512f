#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace cubeslice {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational in lowest terms with positive denominator.
class BigRational {
public:
    BigRational() = default;
    BigRational(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
    BigRational(const BigInt& numerator, const BigInt& denominator);
    explicit BigRational(const BigInt& n) : value_(n) {}

    BigInt numerator() const;
    BigInt denominator() const;

    /// Nearest double (correctly rounded, ties to even).
    double to_double() const;
    /// Decimal rendering rounded half-even to `significant` digits.
    std::string to_decimal(int significant = 15) const;
    /// "p/q", or "p" when q == 1.
    std::string str() const;

    int sign() const;

    friend BigRational operator+(const BigRational& a, const BigRational& b) { return BigRational(a.value_ + b.value_, 0); }
    friend BigRational operator-(const BigRational& a, const BigRational& b) { return BigRational(a.value_ - b.value_, 0); }
    friend BigRational operator*(const BigRational& a, const BigRational& b) { return BigRational(a.value_ * b.value_, 0); }
    friend BigRational operator/(const BigRational& a, const BigRational& b);
    BigRational operator-() const { return BigRational(-value_, 0); }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    using Rep = boost::multiprecision::cpp_rational;
    BigRational(Rep v, int) : value_(std::move(v)) {}
    Rep value_;
};

/// Round n / d (d > 0) to the nearest integer, ties to even.
BigInt round_half_even(const BigInt& n, const BigInt& d);

}  // namespace cubeslice
