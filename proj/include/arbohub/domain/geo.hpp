#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace arbohub::geo {

// Brazilian federative units keyed by the two-digit IBGE state code.
struct FederativeUnit {
    int code;
    std::string_view uf;
};

std::optional<FederativeUnit> unit_by_code(int code);
std::optional<FederativeUnit> unit_by_uf(std::string_view uf);

// Accepts a two-letter UF (any case) or a two-digit state geocode and returns
// the upper-case UF.
std::optional<std::string> normalize_uf(std::string_view text);

// A 7-digit IBGE municipality code whose first two digits name a state.
bool is_municipality_geocode(std::int64_t geocode);

std::optional<std::string> uf_of_geocode(std::int64_t geocode);

// ISO 3166-1 alpha-2 shape: exactly two upper-case ASCII letters.
bool is_country_code(std::string_view text);

}  // namespace arbohub::geo
