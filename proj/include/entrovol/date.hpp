#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace entrovol {

// Calendar date stored as a serial day number (days since 1970-01-01).
// Civil-from-days / days-from-civil arithmetic follows Howard Hinnant's
// public-domain algorithms, so ordering and arithmetic are plain integers.
class Date {
public:
    Date() = default;
    explicit Date(std::int32_t serial) : serial_(serial) {}
    Date(int year, unsigned month, unsigned day);

    static Date parse_iso(const std::string& text);   // "YYYY-MM-DD"
    static Date parse_compact(const std::string& text);  // "YYYYMMDD"

    std::int32_t serial() const { return serial_; }
    int year() const;
    unsigned month() const;
    unsigned day() const;

    std::string to_iso() const;

    auto operator<=>(const Date&) const = default;

private:
    std::int32_t serial_ = 0;
};

}  // namespace entrovol
