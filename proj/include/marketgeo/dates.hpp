#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mgeo {

/// Calendar day. Thin wrapper over std::chrono::sys_days with ISO-8601 text I/O.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days d) : days_(d) {}
    Date(int year, unsigned month, unsigned day);

    /// Parses "YYYY-MM-DD"; throws DataError on anything else.
    static Date parse(std::string_view iso);

    std::string to_string() const;

    int year() const;
    unsigned month() const;  // 1..12
    unsigned day() const;    // 1..31

    /// Months since year 0, used for fixed-length calendar blocks.
    int month_index() const { return year() * 12 + static_cast<int>(month()) - 1; }

    std::chrono::sys_days sys() const { return days_; }
    Date plus_days(int n) const { return Date(days_ + std::chrono::days{n}); }

    auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

/// Inclusive date range.
struct DateRange {
    Date first;
    Date last;
    bool contains(Date d) const { return first <= d && d <= last; }
};

} // namespace mgeo
