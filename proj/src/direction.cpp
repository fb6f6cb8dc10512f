#include "cubeslice/direction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "cubeslice/error.hpp"

namespace cubeslice {

namespace {

double euclidean_norm(std::span<const double> x) noexcept {
    // Scaled to avoid overflow for huge inputs.
    double scale = 0.0;
    for (double c : x) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (double c : x) {
        const double r = c / scale;
        sum += r * r;
    }
    return scale * std::sqrt(sum);
}

bool nonincreasing_nonnegative(std::span<const double> x) noexcept {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0 || std::signbit(x[i])) return false;
        if (i > 0 && x[i] > x[i - 1]) return false;
    }
    return true;
}

std::vector<double> canonical_coords(std::span<const double> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double c) { return std::abs(c); });
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

}  // namespace

Direction::Direction(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) {
        throw UsageError("direction needs dimension d >= 2, got " + std::to_string(coords_.size()));
    }
    bool nonzero = false;
    for (double c : coords_) {
        if (!std::isfinite(c)) throw UsageError("direction has a non-finite coordinate");
        nonzero = nonzero || c != 0.0;
    }
    if (!nonzero) throw UsageError("direction must be nonzero");
    canonical_ = nonincreasing_nonnegative(coords_);
}

double Direction::norm1() const noexcept {
    double s = 0.0;
    for (double c : coords_) s += std::abs(c);
    return s;
}

double Direction::norm2() const noexcept { return euclidean_norm(coords_); }

UnitDirection::UnitDirection(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) {
        throw UsageError("unit direction needs dimension d >= 2, got " + std::to_string(coords_.size()));
    }
    for (double c : coords_) {
        if (!std::isfinite(c)) throw UsageError("unit direction has a non-finite coordinate");
    }
    const double n = euclidean_norm(coords_);
    if (std::abs(n - 1.0) > kNormTolerance) {
        throw UsageError("unit direction has norm " + std::to_string(n));
    }
}

double UnitDirection::norm1() const noexcept {
    double s = 0.0;
    for (double c : coords_) s += std::abs(c);
    return s;
}

Direction canonicalize(const Direction& v) { return Direction(canonical_coords(v.coords())); }

UnitDirection canonicalize(const UnitDirection& u) { return UnitDirection(canonical_coords(u.coords())); }

UnitDirection normalize(const Direction& v) {
    const double n = v.norm2();
    std::vector<double> out(v.coords().begin(), v.coords().end());
    for (double& c : out) c /= n;
    return UnitDirection(std::move(out));
}

UnitDirection random_unit_direction(std::size_t d, CounterRng& rng) {
    if (d < 2) throw UsageError("random_unit_direction needs d >= 2");
    std::vector<double> g(d);
    double n = 0.0;
    // A zero draw has probability ~2^-53 per coordinate across the whole
    // vector; redraw instead of dividing by zero.
    do {
        for (double& c : g) c = rng.normal();
        n = euclidean_norm(g);
    } while (n == 0.0);
    for (double& c : g) c /= n;
    return UnitDirection(std::move(g));
}

UnitDirection diagonal(std::size_t d) {
    if (d < 2) throw UsageError("diagonal needs d >= 2");
    return UnitDirection(std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d))));
}

UnitDirection axis(std::size_t d, std::size_t i) {
    if (d < 2) throw UsageError("axis needs d >= 2");
    if (i >= d) throw UsageError("axis index out of range");
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    return UnitDirection(std::move(e));
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double angle_between(std::span<const double> a, std::span<const double> b) noexcept {
    const double c = dot(a, b);
    double perp = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = a[i] - c * b[i];
        perp += r * r;
    }
    return std::atan2(std::sqrt(perp), c);
}

}  // namespace cubeslice
