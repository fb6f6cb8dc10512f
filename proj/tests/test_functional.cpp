#include <cmath>

#include "doctest.h"

#include "cubeslice/direction.hpp"
#include "cubeslice/functional.hpp"
#include "cubeslice/parallel.hpp"
#include "cubeslice/sinc.hpp"

using namespace cubeslice;

TEST_CASE("evaluate_f examples") {
    const EngineConfig exact;
    const auto diag = evaluate_f(Direction({1, 1, 1}), exact);
    CHECK(diag.f_value == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(diag.bound == 2.25);
    CHECK(std::abs(diag.gap) <= 1e-12);

    const auto ax = evaluate_f(axis(5, 0), exact);
    CHECK(ax.f_value == 1.0);
    CHECK(ax.gap == doctest::Approx(5.0 * 115.0 / 192.0 - 1.0).epsilon(1e-15));
    CHECK(ax.gap == doctest::Approx(1.9948).epsilon(1e-4));

    const auto prism = evaluate_f(Direction({1, 1, 0}), exact);
    CHECK(prism.f_value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(prism.gap == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("F is scale invariant") {
    const EngineConfig exact;
    const Direction v({0.4, -1.3, 2.0, 0.7});
    const double base = evaluate_f(v, exact).f_value;
    // Exact up to rounding of the normalization.
    for (double c : {1e-3, 0.5, 7.0, 1e6}) {
        std::vector<double> s(v.coords().begin(), v.coords().end());
        for (double& x : s) x *= c;
        CHECK(evaluate_f(Direction(s), exact).f_value == doctest::Approx(base).epsilon(1e-15));
    }
    // Powers of two scale exactly.
    std::vector<double> s(v.coords().begin(), v.coords().end());
    for (double& x : s) x *= 8.0;
    CHECK(evaluate_f(Direction(s), exact).f_value == base);
}

TEST_CASE("F is invariant under signed permutations") {
    const EngineConfig exact;
    const SeedStream root(Seed{31});
    for (std::uint64_t i = 0; i < 1000; ++i) {
        CounterRng rng = root.split(i).generator();
        const std::size_t d = 2 + i % 9;
        const UnitDirection u = random_unit_direction(d, rng);
        std::vector<double> c(u.coords().begin(), u.coords().end());
        for (std::size_t k = d; k > 1; --k) std::swap(c[k - 1], c[static_cast<std::size_t>(rng.uniform() * k)]);
        for (double& x : c)
            if (rng.uniform() < 0.5) x = -x;
        REQUIRE(std::abs(evaluate_f(u, exact).f_value - evaluate_f(UnitDirection(c), exact).f_value) <= 1e-12);
    }
}

TEST_CASE("equality at the diagonal") {
    EngineConfig quad;
    quad.method = VolumeMethod::quadrature;
    for (std::size_t d = 2; d <= 12; ++d) {
        const double bound = v_d_bound(static_cast<int>(d)).to_double();
        CAPTURE(d);
        CHECK(std::abs(evaluate_f(diagonal(d), EngineConfig{}).f_value - bound) <= 1e-9);
        CHECK(std::abs(evaluate_f(diagonal(d), quad).f_value - bound) <= 1e-9);
    }
}

TEST_CASE("structured_directions") {
    const auto s = structured_directions(3);
    // 3 axes, 3 pairs, diagonal, 3 prefixes.
    REQUIRE(s.size() == 10);
    CHECK(s[0][0] == 1.0);
    CHECK(s[3][0] == doctest::Approx(std::sqrt(0.5)));
    CHECK(s[6][2] == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("verify_theorem") {
    const EngineConfig exact;
    SUBCASE("d = 6, 10^4 samples") {
        const auto r = verify_theorem(6, 10000, Seed{1}, exact);
        CHECK(r.violations == 0);
        CHECK(r.random_samples == 10000);
        CHECK(r.max_f == doctest::Approx(v_d_bound(6).to_double()).epsilon(1e-12));
        CHECK(r.angle_to_diagonal <= 1e-12);
        CHECK(r.worst_gap >= -1e-7);
    }
    SUBCASE("d = 2, structured set") {
        const auto r = verify_theorem(2, 0, Seed{1}, exact);
        CHECK(r.violations == 0);
        CHECK(r.max_f == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(r.argmax[0] == doctest::Approx(std::sqrt(0.5)));
        CHECK(r.argmax[1] == doctest::Approx(std::sqrt(0.5)));
    }
    SUBCASE("d = 3, structured set") {
        const auto r = verify_theorem(3, 0, Seed{1}, exact);
        CHECK(r.max_f == doctest::Approx(2.25).epsilon(1e-14));
        CHECK(r.angle_to_diagonal <= 1e-12);
        CHECK(r.structured_samples == 10);
    }
    SUBCASE("quadrature engine") {
        EngineConfig quad;
        quad.method = VolumeMethod::quadrature;
        const auto r = verify_theorem(5, 500, Seed{2}, quad);
        CHECK(r.violations == 0);
    }
    SUBCASE("a tolerance below zero flags the diagonal") {
        VerifyOptions opts;
        opts.tol = -1e-3;
        const auto r = verify_theorem(4, 0, Seed{1}, exact, opts);
        CHECK(r.violations >= 1);
        CHECK_FALSE(r.violating.empty());
    }
}

TEST_CASE("verify_theorem is independent of threads") {
    const EngineConfig exact;
    VerifyOptions serial;
    serial.exec = Execution::serial;
    const auto a = verify_theorem(5, 2000, Seed{3}, exact, serial);
    set_num_threads(4);
    const auto b = verify_theorem(5, 2000, Seed{3}, exact);
    set_num_threads(0);
    CHECK(a.max_f == b.max_f);
    CHECK(a.worst_gap == b.worst_gap);
    CHECK(a.violations == b.violations);
    CHECK(a.near_equality == b.near_equality);
    for (std::size_t i = 0; i < 5; ++i) CHECK(a.argmax[i] == b.argmax[i]);

    const auto dirs = random_directions(4, 300, Seed{8});
    CHECK(evaluate_f_batch(dirs, exact) == evaluate_f_batch_serial(dirs, exact));
}

TEST_CASE("sinc_bound_check") {
    const auto diag = sinc_bound_check(diagonal(5), 1e-9);
    CHECK(diag.holds);
    CHECK(std::abs(diag.slack) <= 1e-9);
    const auto ax = sinc_bound_check(axis(4, 0), 1e-9);
    CHECK(ax.holds);
    CHECK(ax.lhs == doctest::Approx(0.25));
    CHECK(ax.slack == doctest::Approx(5.0 / 12.0));
    const auto dirs = random_directions(7, 1000, Seed{4});
    std::size_t failures = 0;
    for (const auto& s : dirs)
        if (!sinc_bound_check(s, 1e-9).holds) ++failures;
    CHECK(failures == 0);
}
