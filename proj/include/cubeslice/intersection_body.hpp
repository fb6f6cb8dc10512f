#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cubeslice/direction.hpp"
#include "cubeslice/section_volume.hpp"

namespace cubeslice {

/// Q^d = scale * C^d with scale = (sqrt(d) sigma_d)^(-1/(d-1)), so that the
/// diagonal section of Q^d has (d-1)-volume exactly 1.
struct NormalizationScale {
    std::size_t d = 0;
    double scale = 0.0;
    /// scale^(d-1) = 1 / (sqrt(d) sigma_d); multiplies C^d section volumes.
    double section_factor = 0.0;

    static NormalizationScale for_dimension(std::size_t d);
};

/// A point on the boundary of I Q^d: f(coords) = 1.
struct BoundaryPoint {
    std::vector<double> coords;
    VolumeEstimate volume;  // C^d section volume along the direction
};

/// The intersection body of the normalized cube, available only through
/// its distance function f(x) = ||x||_2 / vol(Q^d cap x^perp) and the
/// radial map u -> vol(Q^d cap u^perp) u.
class IntersectionBody {
public:
    IntersectionBody(std::size_t d, EngineConfig engine);

    std::size_t dim() const noexcept { return scale_.d; }
    const NormalizationScale& scale() const noexcept { return scale_; }
    const EngineConfig& engine() const noexcept { return engine_; }

    /// f(x) for nonzero x; the volume is evaluated at the canonical form of
    /// x, so f(x) == f(-x) bit for bit.
    double distance(const Direction& x) const;
    /// f(x) allowing x == 0 (returns 0).
    double distance(std::span<const double> x) const;

    BoundaryPoint boundary_point(const UnitDirection& u) const;

    /// Volume of Q^d cap u^perp.
    VolumeEstimate q_section(const UnitDirection& u, std::uint64_t stream = 0) const;

private:
    NormalizationScale scale_;
    EngineConfig engine_;
};

struct SupportReport {
    std::size_t d = 0;
    std::size_t samples = 0;
    double tol = 0.0;
    double sqrt_d = 0.0;
    double max_sum = 0.0;  // max over samples of sum_i p_i
    std::vector<double> argmax;
    double diagonal_sum = 0.0;  // sum_i p_i at u = h
    bool diagonal_equality = false;
    std::size_t violations = 0;
};

/// Every boundary point p satisfies sum p_i <= sqrt(d) + tol,
/// with equality at h. Samples are random unit directions folded into the
/// nonnegative orthant; h is always evaluated. tol < 0 selects 10x the
/// engine's per-sample error bound.
SupportReport support_check(const IntersectionBody& body, std::size_t samples, Seed seed, double tol,
                            double equality_tol, Execution exec = Execution::parallel);

struct BusemannReport {
    std::size_t d = 0;
    std::size_t pairs = 0;
    double tol = 0.0;
    double worst_slack = 0.0;  // min over pairs of f(x) + f(y) - f(x + y)
    std::size_t violations = 0;
};

/// Triangle inequality of f on random boundary pairs x, y.
BusemannReport busemann_convexity_check(const IntersectionBody& body, std::size_t pairs, Seed seed, double tol,
                                        Execution exec = Execution::parallel);

struct CyclicAverageResult {
    double f_p = 0.0;
    std::vector<double> average;  // (1/d) sum of the cyclic shifts of p
    double f_average = 0.0;
    bool holds = true;
};

/// Averages the d cyclic shifts of p (all in I Q^d by symmetry) and checks
/// the average stays in I Q^d: f(y) <= 1 + tol. Requires p > 0 entrywise
/// and f(p) <= 1 + tol; otherwise throws UsageError.
CyclicAverageResult cyclic_average_check(const IntersectionBody& body, const Direction& p, double tol = 1e-9);

}  // namespace cubeslice
