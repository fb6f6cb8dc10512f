#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cubeslice/direction.hpp"
#include "cubeslice/parallel.hpp"
#include "cubeslice/section_volume.hpp"

namespace cubeslice {

/// F(v) = ||v||_1 / ||v||_2 * vol(C^d cap v^perp) against its maximum d * sigma_d.
struct FunctionalReport {
    UnitDirection direction;
    double f_value = 0.0;
    double bound = 0.0;  // d * sigma_d
    double gap = 0.0;    // bound - f_value
    VolumeEstimate volume;
    double error_bound = 0.0;  // ||v||_1 * volume.error_bound
};

FunctionalReport evaluate_f(const Direction& v, const EngineConfig& engine);
FunctionalReport evaluate_f(const UnitDirection& v, const EngineConfig& engine);

/// Values of F over a batch of unit directions; direction i uses Monte Carlo
/// stream i when the engine samples.
std::vector<double> evaluate_f_batch(const std::vector<UnitDirection>& dirs, const EngineConfig& engine,
                                     Execution exec = Execution::parallel);
std::vector<double> evaluate_f_batch_serial(const std::vector<UnitDirection>& dirs, const EngineConfig& engine);

/// Axes, every (e_i + e_j)/sqrt(2), the main diagonal, and the 0/1 vectors
/// with the first k entries equal to 1 for k = 1..d, in that fixed order.
std::vector<UnitDirection> structured_directions(std::size_t d);

/// Random unit directions; sample i is drawn from stream split(i).
std::vector<UnitDirection> random_directions(std::size_t d, std::size_t count, Seed seed);

struct VerificationSummary {
    std::size_t d = 0;
    std::size_t random_samples = 0;
    std::size_t structured_samples = 0;
    double bound = 0.0;
    double tol = 0.0;
    double max_f = 0.0;
    UnitDirection argmax;
    double angle_to_diagonal = 0.0;  // of argmax
    double worst_gap = 0.0;          // min over samples of bound - F
    std::size_t violations = 0;
    /// Samples with gap <= near_equality_tol. Reported only; uniqueness of
    /// the maximizer is not asserted.
    std::size_t near_equality = 0;
    double near_equality_tol = 0.0;
    std::vector<UnitDirection> violating;  // first few, for diagnosis
};

struct VerifyOptions {
    double tol = 1e-7;
    double near_equality_tol = 1e-9;
    bool include_structured = true;
    Execution exec = Execution::parallel;
};

/// Samples n_samples random directions plus the structured set and counts
/// F(v) > bound + tol. Reduction order is fixed: structured set first,
/// then random samples by index.
VerificationSummary verify_theorem(std::size_t d, std::size_t n_samples, Seed seed, const EngineConfig& engine,
                                   const VerifyOptions& opts = {});

struct SincBoundResult {
    bool holds = true;
    double lhs = 0.0;    // (2 ||s||_1 / (pi d)) int_0^inf prod sinc(s_i t) dt
    double sigma = 0.0;  // sigma_d
    double slack = 0.0;  // sigma - lhs
    double error_bound = 0.0;
};

/// lhs <= sigma_d + eps, with the integral from volume_quadrature.
SincBoundResult sinc_bound_check(const UnitDirection& s, double eps);

}  // namespace cubeslice
