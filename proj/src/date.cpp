#include "entrovol/date.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace entrovol {

namespace {

std::int32_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

void civil_from_days(std::int32_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

unsigned days_in_month(int y, unsigned m) {
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29u : 28u;
    }
    return lengths[m - 1];
}

int parse_uint_field(const char* first, const char* last, const std::string& text) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("bad date: '" + text + "'");
    return value;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month))
        throw std::invalid_argument("invalid calendar date");
    serial_ = days_from_civil(year, month, day);
}

Date Date::parse_iso(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw std::invalid_argument("bad date: '" + text + "' (want YYYY-MM-DD)");
    const char* p = text.data();
    return Date(parse_uint_field(p, p + 4, text),
                static_cast<unsigned>(parse_uint_field(p + 5, p + 7, text)),
                static_cast<unsigned>(parse_uint_field(p + 8, p + 10, text)));
}

Date Date::parse_compact(const std::string& text) {
    if (text.size() != 8)
        throw std::invalid_argument("bad date: '" + text + "' (want YYYYMMDD)");
    const char* p = text.data();
    return Date(parse_uint_field(p, p + 4, text),
                static_cast<unsigned>(parse_uint_field(p + 4, p + 6, text)),
                static_cast<unsigned>(parse_uint_field(p + 6, p + 8, text)));
}

int Date::year() const {
    int y;
    unsigned m, d;
    civil_from_days(serial_, y, m, d);
    return y;
}

unsigned Date::month() const {
    int y;
    unsigned m, d;
    civil_from_days(serial_, y, m, d);
    return m;
}

unsigned Date::day() const {
    int y;
    unsigned m, d;
    civil_from_days(serial_, y, m, d);
    return d;
}

std::string Date::to_iso() const {
    int y;
    unsigned m, d;
    civil_from_days(serial_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
    return buf;
}

}  // namespace entrovol
