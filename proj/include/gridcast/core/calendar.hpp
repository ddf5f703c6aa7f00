#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace gridcast::core {

/**
 * Calendar date at daily resolution, stored as days since 1970-01-01.
 *
 * The integer representation makes differencing and window arithmetic
 * exact; conversions to/from YYYY-MM-DD go through std::chrono's
 * proleptic Gregorian calendar.
 */
class Date {
public:
    Date() = default;
    explicit Date(int days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day);

    /// Parses "YYYY-MM-DD". Throws MalformedCsv on any other shape or an
    /// invalid calendar date.
    static Date parse(std::string_view iso);

    std::string to_string() const;

    int days_since_epoch() const { return days_; }
    int year() const;
    unsigned month() const;      // 1..12
    unsigned day() const;        // 1..31
    int day_of_week() const;     // 0 = Monday .. 6 = Sunday
    int day_of_year() const;     // 1..366

    Date operator+(int days) const { return Date(days_ + days); }
    Date operator-(int days) const { return Date(days_ - days); }
    int operator-(Date other) const { return days_ - other.days_; }
    Date& operator++() { ++days_; return *this; }

    auto operator<=>(const Date&) const = default;

private:
    int days_ = 0;
};

} // namespace gridcast::core
