#include "arbohub/domain/geo.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace arbohub::geo {

namespace {

constexpr std::array<FederativeUnit, 27> kUnits{{
    {11, "RO"}, {12, "AC"}, {13, "AM"}, {14, "RR"}, {15, "PA"}, {16, "AP"}, {17, "TO"},
    {21, "MA"}, {22, "PI"}, {23, "CE"}, {24, "RN"}, {25, "PB"}, {26, "PE"}, {27, "AL"},
    {28, "SE"}, {29, "BA"}, {31, "MG"}, {32, "ES"}, {33, "RJ"}, {35, "SP"}, {41, "PR"},
    {42, "SC"}, {43, "RS"}, {50, "MS"}, {51, "MT"}, {52, "GO"}, {53, "DF"},
}};

}  // namespace

std::optional<FederativeUnit> unit_by_code(int code) {
    auto it = std::find_if(kUnits.begin(), kUnits.end(),
                           [code](const FederativeUnit& u) { return u.code == code; });
    if (it == kUnits.end()) return std::nullopt;
    return *it;
}

std::optional<FederativeUnit> unit_by_uf(std::string_view uf) {
    if (uf.size() != 2) return std::nullopt;
    const char upper[2] = {static_cast<char>(std::toupper(static_cast<unsigned char>(uf[0]))),
                           static_cast<char>(std::toupper(static_cast<unsigned char>(uf[1])))};
    const std::string_view key{upper, 2};
    auto it = std::find_if(kUnits.begin(), kUnits.end(),
                           [key](const FederativeUnit& u) { return u.uf == key; });
    if (it == kUnits.end()) return std::nullopt;
    return *it;
}

std::optional<std::string> normalize_uf(std::string_view text) {
    if (text.size() != 2) return std::nullopt;
    if (std::isdigit(static_cast<unsigned char>(text[0])) &&
        std::isdigit(static_cast<unsigned char>(text[1]))) {
        if (auto u = unit_by_code((text[0] - '0') * 10 + (text[1] - '0'))) {
            return std::string{u->uf};
        }
        return std::nullopt;
    }
    if (auto u = unit_by_uf(text)) return std::string{u->uf};
    return std::nullopt;
}

bool is_municipality_geocode(std::int64_t geocode) {
    if (geocode < 1000000 || geocode > 9999999) return false;
    return unit_by_code(static_cast<int>(geocode / 100000)).has_value();
}

std::optional<std::string> uf_of_geocode(std::int64_t geocode) {
    if (!is_municipality_geocode(geocode)) return std::nullopt;
    return std::string{unit_by_code(static_cast<int>(geocode / 100000))->uf};
}

bool is_country_code(std::string_view text) {
    return text.size() == 2 && std::isupper(static_cast<unsigned char>(text[0])) &&
           std::isupper(static_cast<unsigned char>(text[1]));
}

}  // namespace arbohub::geo
