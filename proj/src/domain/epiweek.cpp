#include "arbohub/domain/epiweek.hpp"

#include <cctype>
#include <stdexcept>

namespace arbohub {

namespace {

// Sunday opening week 1 of the given epidemiological year: the Sunday on or
// before January 4th.
CivilDate first_week_start(int year) {
    const CivilDate jan4 = CivilDate::from_ymd(year, 1, 4);
    return jan4.plus_days(-static_cast<long>(jan4.weekday()));
}

}  // namespace

int epiweeks_in_year(int year) {
    return static_cast<int>(first_week_start(year).days_until(first_week_start(year + 1)) / 7);
}

EpiWeek epiweek_from_date(CivilDate date) {
    const CivilDate sunday = date.plus_days(-static_cast<long>(date.weekday()));
    // The Wednesday of a week decides which year owns it.
    const int year = sunday.plus_days(3).year();
    const long offset = first_week_start(year).days_until(sunday);
    return EpiWeek{year, static_cast<int>(offset / 7) + 1};
}

CivilDate epiweek_to_start_date(EpiWeek week) {
    if (week.week < 1 || week.week > epiweeks_in_year(week.year)) {
        throw std::out_of_range("epidemiological week " + std::to_string(week.encoded()) +
                                " does not exist");
    }
    return first_week_start(week.year).plus_days(7L * (week.week - 1));
}

std::optional<EpiWeek> EpiWeek::decode(long yyyyww) {
    if (yyyyww < 100001 || yyyyww > 999953) return std::nullopt;
    const EpiWeek w{static_cast<int>(yyyyww / 100), static_cast<int>(yyyyww % 100)};
    if (w.week < 1 || w.week > epiweeks_in_year(w.year)) return std::nullopt;
    return w;
}

std::optional<EpiWeek> EpiWeek::parse(const std::string& text) {
    if (text.size() != 6) return std::nullopt;
    for (unsigned char c : text) {
        if (!std::isdigit(c)) return std::nullopt;
    }
    return decode(std::stol(text));
}

}  // namespace arbohub
