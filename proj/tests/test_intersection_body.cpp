#include <cmath>

#include "doctest.h"

#include "cubeslice/direction.hpp"
#include "cubeslice/error.hpp"
#include "cubeslice/functional.hpp"
#include "cubeslice/intersection_body.hpp"
#include "cubeslice/sinc.hpp"

using namespace cubeslice;

namespace {

std::vector<double> scaled(std::span<const double> x, double c) {
    std::vector<double> out(x.begin(), x.end());
    for (double& v : out) v *= c;
    return out;
}

}  // namespace

TEST_CASE("normalization scale") {
    for (std::size_t d = 2; d <= 10; ++d) {
        const auto s = NormalizationScale::for_dimension(d);
        CHECK(std::pow(s.scale, static_cast<double>(d - 1)) == doctest::Approx(s.section_factor).epsilon(1e-14));
        CHECK(s.section_factor * diagonal_section_value(static_cast<int>(d)) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(NormalizationScale::for_dimension(1), UsageError);
}

TEST_CASE("distance function examples") {
    const IntersectionBody body(3, EngineConfig{});
    const UnitDirection h = diagonal(3);
    CHECK(body.distance(h.as_direction()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(body.distance(Direction(scaled(h.coords(), 2.0))) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(body.distance(axis(3, 0).as_direction()) == doctest::Approx(3.0 * std::sqrt(3.0) / 4.0).epsilon(1e-14));
    const std::vector<double> zero(3, 0.0);
    CHECK(body.distance(std::span<const double>(zero)) == 0.0);
}

TEST_CASE("boundary_point examples") {
    const IntersectionBody body3(3, EngineConfig{});
    const auto h = body3.boundary_point(diagonal(3));
    for (double c : h.coords) CHECK(c == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    const auto minus_h = body3.boundary_point(UnitDirection(scaled(diagonal(3).coords(), -1.0)));
    for (double c : minus_h.coords) CHECK(c == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    const auto e1 = body3.boundary_point(axis(3, 0));
    CHECK(e1.coords[0] == doctest::Approx(4.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-14));
    CHECK(e1.coords[0] == doctest::Approx(0.7698).epsilon(1e-4));
    CHECK(e1.coords[1] == 0.0);

    const IntersectionBody body4(4, EngineConfig{});
    const auto e4 = body4.boundary_point(axis(4, 0));
    CHECK(e4.coords[0] + e4.coords[1] + e4.coords[2] + e4.coords[3] == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("homogeneity and symmetry") {
    const auto dirs = random_directions(5, 200, Seed{41});
    const IntersectionBody body(5, EngineConfig{});
    for (const auto& u : dirs) {
        const double f = body.distance(u.as_direction());
        for (double c : {0.5, 2.0, 10.0})
            REQUIRE(std::abs(body.distance(Direction(scaled(u.coords(), c))) - c * f) <= 1e-12 * c * f);
        REQUIRE(body.distance(Direction(scaled(u.coords(), -1.0))) == f);
    }
}

TEST_CASE("boundary points lie on the boundary") {
    for (std::size_t d = 2; d <= 8; ++d) {
        const IntersectionBody body(d, EngineConfig{});
        for (const auto& u : random_directions(d, 150, Seed{40 + d})) {
            const auto p = body.boundary_point(u);
            REQUIRE(std::abs(body.distance(Direction(p.coords)) - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("support_check") {
    for (std::size_t d : {3u, 5u}) {
        const IntersectionBody body(d, EngineConfig{});
        const auto r = support_check(body, d == 5 ? 10000 : 2000, Seed{7}, 1e-7, 1e-9);
        CAPTURE(d);
        CHECK(r.violations == 0);
        CHECK(r.diagonal_equality);
        CHECK(std::abs(r.diagonal_sum - std::sqrt(static_cast<double>(d))) <= 1e-9);
        CHECK(r.max_sum == doctest::Approx(std::sqrt(static_cast<double>(d))).epsilon(1e-12));
    }
    const IntersectionBody body(4, EngineConfig{});
    const auto dflt = support_check(body, 10, Seed{7}, -1.0, 1e-9);
    CHECK(dflt.tol > 0.0);
    CHECK(dflt.violations == 0);
}

TEST_CASE("busemann_convexity_check") {
    const IntersectionBody body(4, EngineConfig{});
    const auto r = busemann_convexity_check(body, 1000, Seed{8}, 1e-9);
    CHECK(r.violations == 0);
    CHECK(r.worst_slack >= -1e-9);

    const auto h = body.boundary_point(diagonal(4)).coords;
    std::vector<double> two_h = scaled(h, 2.0);
    CHECK(body.distance(std::span<const double>(two_h)) == doctest::Approx(2.0).epsilon(1e-14));
    std::vector<double> sum(4);
    for (std::size_t i = 0; i < 4; ++i) sum[i] = h[i] - h[i];
    CHECK(body.distance(std::span<const double>(sum)) == 0.0);
}

TEST_CASE("cyclic_average_check") {
    const IntersectionBody body(3, EngineConfig{});
    const auto at_h = cyclic_average_check(body, diagonal(3).as_direction());
    CHECK(at_h.holds);
    CHECK(at_h.f_average == doctest::Approx(1.0).epsilon(1e-13));

    const auto bp = body.boundary_point(normalize(Direction({2, 1, 1})));
    const auto inner = cyclic_average_check(body, Direction(scaled(bp.coords, 0.9)));
    CHECK(inner.holds);
    CHECK(inner.f_average <= 1.0);

    int passed = 0;
    const SeedStream root(Seed{9});
    for (std::uint64_t i = 0; i < 100; ++i) {
        CounterRng rng = root.split(i).generator();
        std::vector<double> u(3);
        for (double& x : u) x = 0.01 + rng.uniform();
        const auto p = body.boundary_point(normalize(Direction(u)));
        const double shrink = 0.5 + 0.5 * rng.uniform();
        if (cyclic_average_check(body, Direction(scaled(p.coords, shrink))).holds) ++passed;
    }
    CHECK(passed == 100);

    CHECK_THROWS_AS(cyclic_average_check(body, Direction({1.0, 0.0, 1.0})), UsageError);
    CHECK_THROWS_AS(cyclic_average_check(body, Direction({5.0, 5.0, 5.0})), UsageError);
}
