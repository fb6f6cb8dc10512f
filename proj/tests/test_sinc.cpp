#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "cubeslice/error.hpp"
#include "cubeslice/sinc.hpp"

using namespace cubeslice;

namespace {

BigRational q(long n, long d) { return BigRational(BigInt(n), BigInt(d)); }

}  // namespace

TEST_CASE("sigma_exact small values") {
    CHECK(sigma_exact(1) == BigRational(1));
    CHECK(sigma_exact(2) == BigRational(1));
    CHECK(sigma_exact(3) == q(3, 4));
    CHECK(sigma_exact(4) == q(2, 3));
    CHECK(sigma_exact(5) == q(115, 192));
    CHECK(sigma_exact(6) == q(11, 20));
    CHECK_THROWS_AS(sigma_exact(0), UsageError);
    CHECK_THROWS_AS(sigma_exact(-3), UsageError);
}

TEST_CASE("sigma_5 by hand") {
    // (5/16) * (5^4/(0!5!) - 3^4/(1!4!) + 1^4/(2!3!))
    const BigRational sum = q(625, 120) - q(81, 24) + q(1, 12);
    CHECK(q(5, 16) * sum == sigma_exact(5));
}

TEST_CASE("sigma_exact against the quadrature oracle") {
    for (int d = 1; d <= 12; ++d) {
        CAPTURE(d);
        CHECK(std::abs(sigma_exact(d).to_double() - oracle::sinc_power_integral(d)) <= 1e-10);
    }
}

TEST_CASE("sigma is positive and strictly decreasing") {
    BigRational prev = sigma_exact(1);
    for (int d = 2; d <= 301; ++d) {
        const BigRational cur = sigma_exact(d);
        REQUIRE(cur.sign() > 0);
        if (d > 2) REQUIRE(cur < prev);
        prev = cur;
    }
    // sigma_1 = sigma_2 = 1 is the only non-strict step.
    CHECK(sigma_exact(1) == sigma_exact(2));
}

TEST_CASE("V_d is nondecreasing") {
    for (int d = 2; d <= 200; ++d) REQUIRE(v_d_bound(d) <= v_d_bound(d + 1));
}

TEST_CASE("v_d_bound") {
    CHECK(v_d_bound(2) == BigRational(2));
    CHECK(v_d_bound(3) == q(9, 4));
    CHECK(v_d_bound(4) == q(8, 3));
    CHECK_THROWS_AS(v_d_bound(1), UsageError);
}

TEST_CASE("diagonal_volume") {
    CHECK(diagonal_volume(2) == BigRational(1));
    CHECK(diagonal_section_value(2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(diagonal_section_value(3) == doctest::Approx(3.0 * std::sqrt(3.0) / 4.0).epsilon(1e-15));
    CHECK_THROWS_AS(diagonal_volume(1), UsageError);
    CHECK(diagonal_section_limit() == doctest::Approx(1.3819766).epsilon(1e-7));
    CHECK(std::abs(diagonal_section_value(50) - diagonal_section_limit()) <= 0.05);
    CHECK(std::abs(diagonal_section_value(500) - diagonal_section_limit()) <= 0.01);
    // Increases towards the limit from d = 3 on; d = 2 sits above it.
    for (int d = 3; d < 100; ++d) REQUIRE(diagonal_section_value(d) < diagonal_section_value(d + 1));
}

TEST_CASE("SincTable values") {
    const SincTable table(60);
    CHECK(table.d_max() == 60);
    CHECK_THROWS_AS(table.at(0), UsageError);
    CHECK_THROWS_AS(table.at(61), UsageError);
    CHECK(table.at(5).decimal == "0.598958333333333");
    CHECK(table.at(2).decimal == "1");
    for (const SincValue& v : table.values()) {
        CAPTURE(v.d);
        CHECK(v.exact == sigma_exact(v.d));
        CHECK(std::abs(v.approx - v.exact.to_double()) <= 1e-12 * v.approx);
        CHECK(std::stod(v.decimal) == doctest::Approx(v.approx).epsilon(1e-14));
        CHECK(v.exact.sign() > 0);
        CHECK(v.exact <= BigRational(1));
    }
}

TEST_CASE("ratio_check") {
    const RatioCheckResult small = ratio_check(4);
    REQUIRE(small.rows.size() == 3);
    CHECK(small.rows[0].d == 2);
    CHECK(small.rows[0].ratio == q(3, 4));
    CHECK(small.rows[0].lower_bound == q(2, 3));
    CHECK(small.rows[2].d == 4);
    CHECK(small.rows[2].ratio == q(115, 128));
    CHECK(small.rows[2].lower_bound == q(4, 5));
    CHECK(small.violations.empty());

    const RatioCheckResult full = ratio_check(200);
    CHECK(full.violations.empty());
    CHECK(full.rows.size() == 199);
    CHECK(full.table.d_max() == 201);
    for (const RatioRow& row : full.rows) REQUIRE(row.holds);

    CHECK_THROWS_AS(ratio_check(1), UsageError);
}

TEST_CASE("sigma_value agrees with the rational") {
    for (int d : {1, 7, 40, 250}) CHECK(sigma_value(d) == sigma_exact(d).to_double());
    CHECK(sigma_value(500) * std::sqrt(500.0) == doctest::Approx(1.3815).epsilon(1e-3));
}
