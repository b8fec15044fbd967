#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace arbohub {

// A proleptic Gregorian calendar date. The wire form is exactly "YYYY-mm-dd".
class CivilDate {
public:
    constexpr CivilDate() = default;
    explicit constexpr CivilDate(std::chrono::sys_days days) : days_(days) {}

    // Throws std::invalid_argument for a non-existent date.
    static CivilDate from_ymd(int year, unsigned month, unsigned day);

    // Strict parse: four-digit year, two-digit month and day, '-' separators,
    // nothing else. Returns nullopt for any deviation or an impossible date.
    static std::optional<CivilDate> parse(std::string_view text);

    std::string to_string() const;

    std::chrono::sys_days days() const { return days_; }
    std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }
    int year() const { return static_cast<int>(ymd().year()); }
    unsigned month() const { return static_cast<unsigned>(ymd().month()); }
    unsigned day() const { return static_cast<unsigned>(ymd().day()); }

    // 0 = Sunday .. 6 = Saturday
    unsigned weekday() const { return std::chrono::weekday{days_}.c_encoding(); }

    CivilDate plus_days(long n) const { return CivilDate{days_ + std::chrono::days{n}}; }
    long days_until(CivilDate other) const { return (other.days_ - days_).count(); }

    friend constexpr bool operator==(CivilDate, CivilDate) = default;
    friend constexpr auto operator<=>(CivilDate a, CivilDate b) { return a.days_ <=> b.days_; }

private:
    std::chrono::sys_days days_{};
};

}  // namespace arbohub
