#pragma once

#include <compare>
#include <optional>
#include <string>

#include "arbohub/domain/civil_date.hpp"

namespace arbohub {

// Epidemiological week (SE). Weeks run Sunday..Saturday; week 1 of a year is
// the week whose Saturday is the first Saturday of January falling on or after
// January 4th, i.e. the first week with at least four days in January.
struct EpiWeek {
    int year = 0;
    int week = 0;

    // YYYYWW, e.g. 202401.
    int encoded() const { return year * 100 + week; }

    // Validates the week against the number of weeks in that year.
    static std::optional<EpiWeek> decode(long yyyyww);
    static std::optional<EpiWeek> parse(const std::string& text);

    friend constexpr bool operator==(const EpiWeek&, const EpiWeek&) = default;
    friend constexpr auto operator<=>(const EpiWeek&, const EpiWeek&) = default;
};

// 52 or 53.
int epiweeks_in_year(int year);

EpiWeek epiweek_from_date(CivilDate date);

// The Sunday opening the week. Throws std::out_of_range when the week number
// does not exist in that year.
CivilDate epiweek_to_start_date(EpiWeek week);

}  // namespace arbohub
