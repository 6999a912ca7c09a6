#pragma once

#include <stdexcept>
#include <string>

namespace bfcs {

// Invalid analysis configuration, e.g. degrees of freedom below the
// supported range.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input: unparsable files, mismatched
// dimensions, constant columns, label mismatches.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerically degenerate input: singular correlation matrices,
// out-of-range correlations, priors with no supported evidence.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bfcs
