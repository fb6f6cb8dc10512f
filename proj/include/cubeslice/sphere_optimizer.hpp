#pragma once

#include <cstddef>
#include <vector>

#include "cubeslice/direction.hpp"
#include "cubeslice/parallel.hpp"
#include "cubeslice/section_volume.hpp"

namespace cubeslice {

struct StartTrace {
    std::size_t start = 0;
    std::vector<double> initial;
    std::vector<double> final_point;
    double initial_value = 0.0;
    double final_value = 0.0;
    double angle_to_diagonal = 0.0;
    std::size_t evaluations = 0;
    std::size_t accepted_moves = 0;
    double final_step = 0.0;
    bool converged = false;  // step fell below the termination threshold
};

struct MaximizeReport {
    std::size_t d = 0;
    std::vector<double> best;  // canonical form
    double best_value = 0.0;
    double bound = 0.0;  // d * sigma_d
    double angle_to_diagonal = 0.0;
    std::size_t best_start = 0;
    std::size_t starts = 0;
    std::size_t evaluations = 0;
    bool budget_exhausted = false;  // some start ran out of evaluations
    std::vector<StartTrace> traces;
};

struct MaximizeOptions {
    double initial_step = 0.3;   // radians
    double final_step = 1e-7;    // radians
    Execution exec = Execution::parallel;
};

/// Multistart compass search for max F on the nonnegative orthant of
/// S^{d-1}. Start 0 is the diagonal h, start 1 the axis e_1, the rest are
/// random. Each poll tries the tangent directions +-e_i and +-(e_i - e_j),
/// stepping along the great circle and folding negative coordinates to 0;
/// the step halves after a poll with no improvement.
MaximizeReport maximize(std::size_t d, std::size_t starts, std::size_t budget, Seed seed, const EngineConfig& engine,
                        const MaximizeOptions& opts = {});

/// Same, with caller-chosen starting points (each folded into the orthant
/// and normalized). Used for angle grids.
MaximizeReport maximize_from(std::vector<UnitDirection> starts, std::size_t budget, const EngineConfig& engine,
                             const MaximizeOptions& opts = {});

struct ScanReport {
    std::size_t d = 0;
    std::size_t resolution = 0;
    std::size_t points = 0;
    double max_value = 0.0;
    std::vector<double> argmax;
    std::vector<double> argmax_angles;  // d=2: {theta}; d=3: {theta, phi}
    double angle_to_diagonal = 0.0;
    double bound = 0.0;
    double tol = 0.0;
    std::size_t violations = 0;
    struct Row {
        std::vector<double> angles;
        double value;
    };
    std::vector<Row> rows;  // filled when requested
};

/// Exhaustive angular grid over the nonnegative orthant. d = 2: theta_i =
/// (pi/2) i / resolution, u = (cos, sin). d = 3: theta, phi on the same
/// grid, u = (sin theta cos phi, sin theta sin phi, cos theta).
ScanReport grid_scan(std::size_t d, std::size_t resolution, const EngineConfig& engine, double tol = 1e-7,
                     bool keep_rows = false, Execution exec = Execution::parallel);

}  // namespace cubeslice
