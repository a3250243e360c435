#pragma once

#include <stdexcept>
#include <string>

namespace entrovol {

// Raised on invalid input data: malformed files, bar-invariant
// violations, out-of-range intervals, unknown symbols.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a computation is mathematically undefined for the given
// inputs (degenerate variance, fewer than two cross-section members).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entrovol
