#include "gridcast/core/calendar.hpp"
#include "gridcast/core/errors.hpp"

#include <charconv>
#include <chrono>

namespace gridcast::core {

namespace {

std::chrono::year_month_day to_ymd(int days) {
    using namespace std::chrono;
    return year_month_day{sys_days{std::chrono::days{days}}};
}

} // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                       std::chrono::day{day}};
    if (!ymd.ok()) {
        throw MalformedCsv("invalid calendar date: " + std::to_string(year) + "-" +
                           std::to_string(month) + "-" + std::to_string(day));
    }
    return Date(static_cast<int>(sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(std::string_view iso) {
    auto bad = [&] { throw MalformedCsv("expected YYYY-MM-DD date, got '" + std::string(iso) + "'"); };
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') bad();
    int y = 0;
    unsigned m = 0, d = 0;
    auto num = [&](std::string_view s, auto& out) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || ptr != s.data() + s.size()) bad();
    };
    num(iso.substr(0, 4), y);
    num(iso.substr(5, 2), m);
    num(iso.substr(8, 2), d);
    return from_ymd(y, m, d);
}

std::string Date::to_string() const {
    auto ymd = to_ymd(days_);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

int Date::year() const { return static_cast<int>(to_ymd(days_).year()); }
unsigned Date::month() const { return static_cast<unsigned>(to_ymd(days_).month()); }
unsigned Date::day() const { return static_cast<unsigned>(to_ymd(days_).day()); }

int Date::day_of_week() const {
    using namespace std::chrono;
    weekday wd{sys_days{std::chrono::days{days_}}};
    return static_cast<int>(wd.iso_encoding()) - 1; // Monday = 0
}

int Date::day_of_year() const {
    Date jan1 = from_ymd(year(), 1, 1);
    return days_ - jan1.days_ + 1;
}

} // namespace gridcast::core
