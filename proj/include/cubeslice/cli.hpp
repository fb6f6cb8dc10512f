#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cubeslice/direction.hpp"

namespace cubeslice::cli {

enum ExitCode : int {
    kOk = 0,
    kViolations = 1,
    kUsage = 2,
    kEngineFailure = 3,
};

/// One line of CLI output. `error_bounds` is either the string "exact" or
/// an object keyed by result field. Wall time is present only with
/// --timing, so default output is byte-reproducible.
struct OutputRecord {
    std::string command;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    nlohmann::ordered_json result = nlohmann::ordered_json::object();
    nlohmann::ordered_json error_bounds = "exact";
    std::uint64_t seed = 0;
    std::optional<double> wall_time;
};

nlohmann::ordered_json to_json(const OutputRecord& r);
OutputRecord record_from_json(const nlohmann::ordered_json& j);

/// "1,2,3", "diag:d", or "axis:d:i" (i is 1-based).
Direction parse_direction(const std::string& text);

/// Runs the command line (args excludes the program name). Records go to
/// `out` (or --out FILE), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cubeslice::cli
