#include "marketgeo/dates.hpp"

#include "marketgeo/errors.hpp"

#include <charconv>
#include <cstdio>

namespace mgeo {

namespace {

int parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError("invalid date field '" + std::string(s) + "'");
    return v;
}

} // namespace

Date::Date(int year, unsigned month, unsigned day) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok())
        throw DataError("invalid calendar date " + std::to_string(year) + "-" +
                        std::to_string(month) + "-" + std::to_string(day));
    days_ = sys_days{ymd};
}

Date Date::parse(std::string_view iso) {
    // YYYY-MM-DD, no other forms accepted.
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw DataError("date not in YYYY-MM-DD form: '" + std::string(iso) + "'");
    int y = parse_int(iso.substr(0, 4));
    int m = parse_int(iso.substr(5, 2));
    int d = parse_int(iso.substr(8, 2));
    return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

int Date::year() const {
    return int(std::chrono::year_month_day{days_}.year());
}

unsigned Date::month() const {
    return unsigned(std::chrono::year_month_day{days_}.month());
}

unsigned Date::day() const {
    return unsigned(std::chrono::year_month_day{days_}.day());
}

} // namespace mgeo
