#pragma once

#include <stdexcept>
#include <string>

namespace cubeslice {

/// Caller supplied something outside an operation's domain (bad dimension,
/// zero vector, parameter out of range). The CLI maps these to exit code 2.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numeric engine could not deliver its contract (quadrature did not
/// converge within its panel budget, exact method over its term cap).
/// The CLI maps these to exit code 3.
class EngineError : public std::runtime_error {
public:
    explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cubeslice
