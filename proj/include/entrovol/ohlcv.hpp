#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>

#include "entrovol/date.hpp"

namespace entrovol {

// One symbol-day of end-of-day data: OHLC prices plus traded volume.
struct OhlcvBar {
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    std::int64_t volume = 0;

    // Close-weighted traded value for the day.
    double traded_value() const { return close * static_cast<double>(volume); }

    bool operator==(const OhlcvBar&) const = default;
};

// Empty result means the bar is valid; otherwise a human-readable reason.
std::optional<std::string> bar_violation(const OhlcvBar& bar);

struct EodRecord {
    std::string symbol;
    Date date;
    OhlcvBar bar;
};

}  // namespace entrovol
