#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cubeslice/rng.hpp"

namespace cubeslice {

/// A nonzero vector in R^d, d >= 2, naming the hyperplane v^perp.
/// Validated on construction; immutable afterwards.
class Direction {
public:
    explicit Direction(std::vector<double> coords);

    std::span<const double> coords() const noexcept { return coords_; }
    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const noexcept { return coords_[i]; }

    /// True when all coordinates are nonnegative and nonincreasing.
    bool is_canonical() const noexcept { return canonical_; }

    double norm1() const noexcept;
    double norm2() const noexcept;

private:
    std::vector<double> coords_;
    bool canonical_;
};

/// A direction with Euclidean norm 1 (to within 1e-12).
class UnitDirection {
public:
    static constexpr double kNormTolerance = 1e-12;

    /// Throws UsageError unless | ||coords|| - 1 | <= kNormTolerance.
    explicit UnitDirection(std::vector<double> coords);

    std::span<const double> coords() const noexcept { return coords_; }
    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const noexcept { return coords_[i]; }

    double norm1() const noexcept;
    Direction as_direction() const { return Direction(coords_); }

private:
    std::vector<double> coords_;
};

/// Absolute values sorted nonincreasing. Cube symmetries (sign flips and
/// coordinate permutations) leave the section volume unchanged.
Direction canonicalize(const Direction& v);
UnitDirection canonicalize(const UnitDirection& u);

UnitDirection normalize(const Direction& v);

/// Uniform on S^{d-1}: d independent standard normals, normalized.
UnitDirection random_unit_direction(std::size_t d, CounterRng& rng);

/// (1,...,1)/sqrt(d).
UnitDirection diagonal(std::size_t d);
/// e_i, zero-based index.
UnitDirection axis(std::size_t d, std::size_t i);

double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// Angle between two unit vectors, accurate near zero.
double angle_between(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace cubeslice
