#include "cubeslice/big_rational.hpp"

#include <cmath>
#include <limits>

#include "cubeslice/error.hpp"

namespace cubeslice {

using boost::multiprecision::msb;

BigRational::BigRational(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) throw UsageError("BigRational with zero denominator");
    if (denominator < 0)
        value_ = Rep(BigInt(-numerator), BigInt(-denominator));
    else
        value_ = Rep(numerator, denominator);
}

BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.value_ == 0) throw UsageError("BigRational division by zero");
    return BigRational(a.value_ / b.value_, 0);
}

BigInt BigRational::numerator() const { return boost::multiprecision::numerator(value_); }
BigInt BigRational::denominator() const { return boost::multiprecision::denominator(value_); }

int BigRational::sign() const { return value_.sign(); }

std::string BigRational::str() const {
    const BigInt d = denominator();
    if (d == 1) return numerator().str();
    return numerator().str() + "/" + d.str();
}

BigInt round_half_even(const BigInt& n, const BigInt& d) {
    BigInt q, r;
    boost::multiprecision::divide_qr(n, d, q, r);
    // divide_qr truncates toward zero; move to floor first.
    if (r < 0) {
        q -= 1;
        r += d;
    }
    const BigInt twice = 2 * r;
    if (twice > d || (twice == d && (q & 1) != 0)) q += 1;
    return q;
}

double BigRational::to_double() const {
    const BigInt num = numerator();
    if (num == 0) return 0.0;
    const BigInt den = denominator();
    const bool negative = num < 0;
    const BigInt a = negative ? BigInt(-num) : num;
    // Choose shift so the quotient carries 54..55 significant bits, then
    // round once at 53 bits with the remainder as sticky information.
    const long long shift = 54 - (static_cast<long long>(msb(a)) - static_cast<long long>(msb(den)));
    const BigInt scaled_num = shift >= 0 ? BigInt(a << shift) : a;
    const BigInt scaled_den = shift >= 0 ? den : BigInt(den << -shift);
    BigInt q, r;
    boost::multiprecision::divide_qr(scaled_num, scaled_den, q, r);
    long long exponent = -shift;
    unsigned bits = msb(q) + 1;
    int extra = static_cast<int>(bits) - 53;
    // Honor subnormals: total binary exponent below -1074 loses precision.
    const long long lowest_bit = exponent + extra;
    if (lowest_bit < -1074) extra += static_cast<int>(-1074 - lowest_bit);
    if (extra > 0) {
        const BigInt mask = (BigInt(1) << extra) - 1;
        BigInt low = q & mask;
        q >>= extra;
        exponent += extra;
        const BigInt half = BigInt(1) << (extra - 1);
        const bool sticky = r != 0;
        if (low > half || (low == half && (sticky || (q & 1) != 0))) q += 1;
    }
    const double mantissa = q.convert_to<double>();  // exact: q < 2^54
    double result = std::ldexp(mantissa, static_cast<int>(exponent));
    return negative ? -result : result;
}

std::string BigRational::to_decimal(int significant) const {
    if (significant < 1) throw UsageError("to_decimal needs at least one significant digit");
    const BigInt num = numerator();
    if (num == 0) return "0";
    const BigInt den = denominator();
    const bool negative = num < 0;
    const BigInt a = negative ? BigInt(-num) : num;

    // Decimal exponent e with 10^e <= |x| < 10^(e+1); start from a float
    // estimate and correct exactly.
    long long e = static_cast<long long>(std::floor(
        (static_cast<double>(msb(a)) - static_cast<double>(msb(den))) * std::log10(2.0)));
    auto pow10 = [](long long k) -> BigInt { return boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(k)); };
    auto at_least = [&](long long k) {  // |x| >= 10^k
        return k >= 0 ? a >= den * pow10(k) : a * pow10(-k) >= den;
    };
    while (!at_least(e)) --e;
    while (at_least(e + 1)) ++e;

    // digits = round(|x| * 10^(significant - 1 - e))
    const long long s = significant - 1 - e;
    BigInt digits = s >= 0 ? round_half_even(a * pow10(s), den) : round_half_even(a, den * pow10(-s));
    if (digits >= pow10(significant)) {
        digits /= 10;  // carry rolled over to a new digit; trailing digit is 0
        ++e;
    }
    std::string ds = digits.str();

    std::string out = negative ? "-" : "";
    if (e >= -5 && e < significant) {
        if (e >= 0) {
            out += ds.substr(0, static_cast<std::size_t>(e + 1));
            std::string frac = ds.substr(static_cast<std::size_t>(e + 1));
            while (!frac.empty() && frac.back() == '0') frac.pop_back();
            if (!frac.empty()) out += "." + frac;
        } else {
            std::string frac = std::string(static_cast<std::size_t>(-e - 1), '0') + ds;
            while (!frac.empty() && frac.back() == '0') frac.pop_back();
            out += "0." + frac;
        }
    } else {
        std::string frac = ds.substr(1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out += ds.substr(0, 1);
        if (!frac.empty()) out += "." + frac;
        out += "e" + std::to_string(e);
    }
    return out;
}

}  // namespace cubeslice
