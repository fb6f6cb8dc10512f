#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubeslice/direction.hpp"
#include "cubeslice/parallel.hpp"
#include "cubeslice/rng.hpp"

namespace cubeslice {

enum class VolumeMethod { exact, quadrature, monte_carlo };

std::string to_string(VolumeMethod m);
VolumeMethod parse_volume_method(const std::string& name);  // exact|quad|quadrature|mc|monte_carlo

/// vol_{d-1}(C^d cap v^perp) for a unit v. `error_bound` is absolute; for
/// monte_carlo it is one binomial standard deviation.
struct VolumeEstimate {
    double value = 0.0;
    VolumeMethod method = VolumeMethod::exact;
    double error_bound = 0.0;
};

/// Coordinates with |v_i| below this are dropped (prism reduction).
inline constexpr double kZeroCoordinate = 1e-14;

/// Nonzero |v_i|, sorted nonincreasing.
std::vector<double> reduced_coordinates(std::span<const double> v);

struct ExactOptions {
    /// Maximum number of nonzero coordinates; the sum has 2^k terms.
    std::size_t max_k = 25;
    /// Recompute in exact dyadic arithmetic when the float path's error
    /// bound exceeds this (absolute) and k <= refine_max_k.
    double refine_above = 1e-11;
    std::size_t refine_max_k = 20;
};

/// Closed form of the density of sum a_i U_i at 0, U_i ~ U[-1/2, 1/2]:
///
///   1 / ((k-1)! prod a_i) * sum_{eps in {0,1}^k} (-1)^|eps| max(0, m - <eps, a>)^(k-1)
///
/// with m = sum a_i / 2 over the k nonzero coordinates. Throws EngineError
/// when k exceeds opts.max_k.
VolumeEstimate volume_exact(const UnitDirection& v, const ExactOptions& opts = {});

struct QuadratureOptions {
    /// Direct truncation is used when it needs at most this many
    /// half-period panels; beyond that the tail is integrated analytically.
    std::size_t max_direct_panels = 4096;
    std::size_t max_panels = 200000;
    std::size_t max_evaluations = 50'000'000;
    /// Largest k for which the 2^(k-1)-term analytic tail is attempted.
    std::size_t analytic_tail_max_k = 20;
};

/// (2/pi) int_0^inf prod sinc(a_i t) dt to absolute accuracy eps in (0, 1e-2].
/// Panels follow the half-periods of sin(a_max t). Throws EngineError
/// when the panel or evaluation budget would be exceeded.
VolumeEstimate volume_quadrature(const UnitDirection& v, double eps, const QuadratureOptions& opts = {});

/// Fraction of n i.i.d. uniform points in C^d with |<v, u>| <= delta/2,
/// divided by delta. error_bound is one binomial standard deviation;
/// the estimator's bias is O(delta^2) where the density is smooth at 0.
VolumeEstimate volume_monte_carlo(const UnitDirection& v, std::uint64_t n, double delta, Seed seed,
                                  Execution exec = Execution::parallel);

/// Hit count kernel behind volume_monte_carlo over the weights `coords`.
/// Sample s always uses Philox counter s, so the OpenMP and serial paths
/// return identical counts for any thread count.
std::uint64_t slab_hits(std::span<const double> coords, std::uint64_t n, double delta, const SeedStream& stream);
std::uint64_t slab_hits_serial(std::span<const double> coords, std::uint64_t n, double delta,
                               const SeedStream& stream);

/// Engine selection shared by the higher-level modules.
struct EngineConfig {
    VolumeMethod method = VolumeMethod::exact;
    double eps = 1e-9;
    std::uint64_t mc_samples = 1'000'000;
    double mc_delta = 0.02;
    Seed seed{};
    ExactOptions exact{};
    QuadratureOptions quadrature{};
    Execution mc_execution = Execution::serial;
};

/// Dispatches on cfg.method. The exact method falls back to quadrature
/// when the reduced dimension exceeds its cap.
VolumeEstimate section_volume(const UnitDirection& v, const EngineConfig& cfg);

/// Same as section_volume with a Monte Carlo seed derived from `stream_index`,
/// so sampling loops do not reuse one random stream for every direction.
VolumeEstimate section_volume(const UnitDirection& v, const EngineConfig& cfg, std::uint64_t stream_index);

struct CrossValidationReport {
    std::optional<VolumeEstimate> exact;  // absent above the exact cap
    VolumeEstimate quadrature;
    VolumeEstimate monte_carlo;
    double bias_allowance = 0.0;  // 0.01 * delta^2
    double quad_discrepancy = 0.0;
    double mc_discrepancy = 0.0;
    bool quad_flag = false;
    bool mc_flag = false;
    bool flagged() const noexcept { return quad_flag || mc_flag; }
};

/// Runs every applicable engine and flags |exact - quad| > eps + exact.error
/// or |exact - mc| > 3 mc.error + 0.01 delta^2. Disagreement is report
/// content, not an error.
CrossValidationReport cross_validate(const UnitDirection& v, double eps, std::uint64_t n, double delta, Seed seed,
                                     Execution exec = Execution::parallel);

}  // namespace cubeslice
