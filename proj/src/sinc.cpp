#include "cubeslice/sinc.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "cubeslice/error.hpp"

namespace cubeslice {

namespace {

std::mutex& memo_mutex() {
    static std::mutex m;
    return m;
}

/// n! for n <= limit, extended on demand.
BigInt factorial(int n) {
    static std::vector<BigInt> table{BigInt(1)};
    std::lock_guard lock(memo_mutex());
    while (static_cast<int>(table.size()) <= n) {
        table.push_back(table.back() * static_cast<unsigned>(table.size()));
    }
    return table[static_cast<std::size_t>(n)];
}

}  // namespace

BigRational sigma_exact(int d) {
    if (d < 1) throw UsageError("sigma_exact needs d >= 1, got " + std::to_string(d));
    // Multiply each term by d! so every summand is an integer:
    // d!/(r!(d-r)!) = C(d, r).
    const BigInt d_fact = factorial(d);
    BigInt sum = 0;
    for (int r = 0; 2 * r < d; ++r) {
        const BigInt binom = d_fact / (factorial(r) * factorial(d - r));
        BigInt term = binom * boost::multiprecision::pow(BigInt(d - 2 * r), static_cast<unsigned>(d - 1));
        if (r % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    const BigInt denominator = (BigInt(1) << (d - 1)) * d_fact;
    return BigRational(sum * d, denominator);
}

double sigma_value(int d) {
    static std::map<int, double> cache;
    {
        std::lock_guard lock(memo_mutex());
        if (auto it = cache.find(d); it != cache.end()) return it->second;
    }
    const double v = sigma_exact(d).to_double();
    std::lock_guard lock(memo_mutex());
    cache.emplace(d, v);
    return v;
}

BigRational v_d_bound(int d) {
    if (d < 2) throw UsageError("v_d_bound needs d >= 2, got " + std::to_string(d));
    return BigRational(d) * sigma_exact(d);
}

BigRational diagonal_volume(int d) {
    if (d < 2) throw UsageError("diagonal_volume needs d >= 2, got " + std::to_string(d));
    return sigma_exact(d);
}

double diagonal_section_value(int d) {
    if (d < 2) throw UsageError("diagonal_section_value needs d >= 2, got " + std::to_string(d));
    return std::sqrt(static_cast<double>(d)) * sigma_value(d);
}

double diagonal_section_limit() { return std::sqrt(6.0 / std::numbers::pi); }

SincTable::SincTable(int d_max) {
    if (d_max < 1) throw UsageError("SincTable needs d_max >= 1");
    values_.reserve(static_cast<std::size_t>(d_max));
    for (int d = 1; d <= d_max; ++d) {
        BigRational s = sigma_exact(d);
        const double approx = s.to_double();
        std::string decimal = s.to_decimal(15);
        values_.push_back({d, std::move(s), approx, std::move(decimal)});
    }
}

const SincValue& SincTable::at(int d) const {
    if (d < 1 || d > d_max()) throw UsageError("SincTable index out of range: " + std::to_string(d));
    return values_[static_cast<std::size_t>(d - 1)];
}

RatioCheckResult ratio_check(int d_max) {
    if (d_max < 2) throw UsageError("ratio_check needs d_max >= 2, got " + std::to_string(d_max));
    RatioCheckResult result{SincTable(d_max + 1), {}, {}};
    const BigRational one(1);
    for (int d = 2; d <= d_max; ++d) {
        const BigRational ratio = result.table.at(d + 1).exact / result.table.at(d).exact;
        const BigRational lower(BigInt(d), BigInt(d + 1));
        const bool above = lower <= ratio;
        const bool below_one = ratio < one && ratio.sign() > 0;
        if (!above) result.violations.push_back({d, ratio, RatioViolation::Kind::below_lower_bound});
        if (!below_one) result.violations.push_back({d, ratio, RatioViolation::Kind::not_below_one});
        result.rows.push_back({d, ratio, lower, above && below_one});
    }
    return result;
}

}  // namespace cubeslice
