#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arbohub/domain/civil_date.hpp"
#include "arbohub/domain/epiweek.hpp"
#include "arbohub/domain/model.hpp"
#include "json.hpp"

namespace nlohmann {

template <class T>
struct adl_serializer<std::optional<T>> {
    static void to_json(json& j, const std::optional<T>& v) {
        if (v) {
            j = *v;
        } else {
            j = nullptr;
        }
    }
    static void from_json(const json& j, std::optional<T>& v) {
        if (j.is_null()) {
            v.reset();
        } else {
            v = j.get<T>();
        }
    }
};

template <>
struct adl_serializer<arbohub::CivilDate> {
    static void to_json(json& j, const arbohub::CivilDate& d) { j = d.to_string(); }
    static void from_json(const json& j, arbohub::CivilDate& d);
};

template <>
struct adl_serializer<arbohub::EpiWeek> {
    static void to_json(json& j, const arbohub::EpiWeek& w) { j = w.encoded(); }
    static void from_json(const json& j, arbohub::EpiWeek& w);
};

}  // namespace nlohmann

namespace arbohub {

NLOHMANN_JSON_SERIALIZE_ENUM(Disease, {
    {Disease::dengue, "dengue"},
    {Disease::zika, "zika"},
    {Disease::chikungunya, "chikungunya"},
})

}  // namespace arbohub

namespace arbohub::datastore {

enum class DatasetKind { infodengue, climate, episcanner, ovitrap };

inline constexpr std::array<DatasetKind, 4> kAllKinds{DatasetKind::infodengue, DatasetKind::climate,
                                                      DatasetKind::episcanner, DatasetKind::ovitrap};

std::string_view to_string(DatasetKind kind);
std::optional<DatasetKind> parse_dataset_kind(std::string_view text);

enum class ColumnType { date, epiweek, integer, real, text };

// Column dictionary entry. Names are the CSV header names and the JSON keys.
struct ColumnSpec {
    std::string_view name;
    ColumnType type;
    bool nullable;
    std::string_view description;
};

std::span<const ColumnSpec> columns_of(DatasetKind kind);

// Weekly surveillance record for one municipality and disease.
struct CaseWeekRecord {
    CivilDate data_iniSE;  // Sunday opening SE
    EpiWeek SE;
    std::int64_t casos = 0;
    double casos_est = 0.0;
    std::optional<std::int64_t> casos_prov;
    std::int64_t municipio_geocodigo = 0;
    double p_rt1 = 0.0;
    double p_inc100k = 0.0;
    int nivel = 1;  // 1 green .. 4 red
    std::optional<std::string> versao_modelo;
    double Rt = 0.0;
    std::optional<std::string> municipio_nome;
    std::int64_t pop = 0;
    int receptivo = 0;
    int transmissao = 0;
    int nivel_inc = 0;
    Disease disease = Disease::dengue;

    friend bool operator==(const CaseWeekRecord&, const CaseWeekRecord&) = default;
};

// Daily municipal climate summary. Pressure units are stored as delivered.
struct ClimateDayRecord {
    CivilDate date;
    std::int64_t geocodigo = 0;
    double temp_min = 0, temp_med = 0, temp_max = 0;
    double precip_min = 0, precip_med = 0, precip_max = 0, precip_tot = 0;
    double pressao_min = 0, pressao_med = 0, pressao_max = 0;
    double umid_min = 0, umid_med = 0, umid_max = 0;

    friend bool operator==(const ClimateDayRecord&, const ClimateDayRecord&) = default;
};

// Fitted epidemic parameters for one municipality, disease and year.
struct EpidemicParamsRecord {
    std::string disease;  // dengue, zika, chik or chikungunya, verbatim
    std::optional<std::string> CID10;
    int year = 0;
    std::int64_t geocode = 0;
    std::optional<std::string> muni_name;
    std::optional<double> peak_week;
    std::optional<double> beta;
    std::optional<double> gamma;
    double R0 = 0.0;
    std::int64_t total_cases = 0;
    std::optional<double> alpha;
    std::optional<double> sum_res;
    std::string ep_ini;  // YYYYWW
    std::string ep_end;  // YYYYWW
    int ep_dur = 1;      // weeks

    friend bool operator==(const EpidemicParamsRecord&, const EpidemicParamsRecord&) = default;
};

enum class TrapStatus { positive, negative };

NLOHMANN_JSON_SERIALIZE_ENUM(TrapStatus, {
    {TrapStatus::positive, "positive"},
    {TrapStatus::negative, "negative"},
})

// One ovitrap collection.
struct OvitrapRecord {
    std::string trap_id;
    double latitude = 0.0;
    double longitude = 0.0;
    CivilDate install_date;
    CivilDate collection_date;
    EpiWeek epi_week;
    int year = 0;
    std::int64_t egg_count = 0;
    TrapStatus status = TrapStatus::negative;
    std::int64_t geocode = 0;

    friend bool operator==(const OvitrapRecord&, const OvitrapRecord&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CaseWeekRecord, data_iniSE, SE, casos, casos_est, casos_prov,
                                   municipio_geocodigo, p_rt1, p_inc100k, nivel, versao_modelo, Rt,
                                   municipio_nome, pop, receptivo, transmissao, nivel_inc, disease)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClimateDayRecord, date, geocodigo, temp_min, temp_med, temp_max,
                                   precip_min, precip_med, precip_max, precip_tot, pressao_min,
                                   pressao_med, pressao_max, umid_min, umid_med, umid_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EpidemicParamsRecord, disease, CID10, year, geocode, muni_name,
                                   peak_week, beta, gamma, R0, total_cases, alpha, sum_res, ep_ini,
                                   ep_end, ep_dur)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(OvitrapRecord, trap_id, latitude, longitude, install_date,
                                   collection_date, epi_week, year, egg_count, status, geocode)

using DatasetRecord =
    std::variant<CaseWeekRecord, ClimateDayRecord, EpidemicParamsRecord, OvitrapRecord>;

DatasetKind kind_of(const DatasetRecord& record);
nlohmann::json record_to_json(const DatasetRecord& record);
DatasetRecord record_from_json(DatasetKind kind, const nlohmann::json& j);

// CSV cells for a JSON item in column-dictionary order; null becomes "".
std::vector<std::string> csv_fields(DatasetKind kind, const nlohmann::json& item);
std::vector<std::string> csv_header(DatasetKind kind);

// Text form of a disease filter value as stored by each kind. Episcanner
// tables use "chik" for chikungunya.
std::vector<std::string> disease_aliases(Disease disease);

}  // namespace arbohub::datastore
