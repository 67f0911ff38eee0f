#pragma once

#include <stdexcept>
#include <string>

namespace toricount {

// Error taxonomy mirrored by the CLI exit codes: config -> 2,
// hypothesis -> 3, budget -> 4.  Anything else is a plain Error.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A mathematical hypothesis the toolkit relies on does not hold for the
// given input (fan not smooth/complete, -K not globally generated, ...).
struct HypothesisError : Error {
    explicit HypothesisError(const std::string& msg) : Error(msg) {}
};

struct BudgetError : Error {
    explicit BudgetError(const std::string& msg) : Error(msg) {}
};

// Internal consistency failure; indicates a bug, not bad input.
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

} // namespace toricount
