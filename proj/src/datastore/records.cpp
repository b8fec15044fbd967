#include "arbohub/datastore/records.hpp"

#include <stdexcept>

namespace nlohmann {

void adl_serializer<arbohub::CivilDate>::from_json(const json& j, arbohub::CivilDate& d) {
    auto parsed = arbohub::CivilDate::parse(j.get<std::string>());
    if (!parsed) throw std::invalid_argument("bad date " + j.dump());
    d = *parsed;
}

void adl_serializer<arbohub::EpiWeek>::from_json(const json& j, arbohub::EpiWeek& w) {
    auto parsed = arbohub::EpiWeek::decode(j.get<long>());
    if (!parsed) throw std::invalid_argument("bad epidemiological week " + j.dump());
    w = *parsed;
}

}  // namespace nlohmann

namespace arbohub::datastore {

namespace {

using T = ColumnType;

constexpr ColumnSpec kInfodengueColumns[] = {
    {"data_iniSE", T::date, false, "Sunday opening the epidemiological week"},
    {"SE", T::epiweek, false, "Epidemiological week, YYYYWW"},
    {"casos", T::integer, false, "Notified cases in the week"},
    {"casos_est", T::real, false, "Nowcast estimate of cases in the week"},
    {"casos_prov", T::integer, true, "Probable cases (notified minus discarded)"},
    {"municipio_geocodigo", T::integer, false, "IBGE 7-digit municipality code"},
    {"p_rt1", T::real, false, "Probability that Rt exceeds 1"},
    {"p_inc100k", T::real, false, "Estimated incidence per 100k inhabitants"},
    {"nivel", T::integer, false, "Alert level: 1 green, 2 yellow, 3 orange, 4 red"},
    {"versao_modelo", T::text, true, "Alert model version"},
    {"Rt", T::real, false, "Effective reproduction number point estimate"},
    {"municipio_nome", T::text, true, "Municipality name"},
    {"pop", T::integer, false, "Population"},
    {"receptivo", T::integer, false, "Climate receptivity 0..3"},
    {"transmissao", T::integer, false, "Evidence of sustained transmission 0..3"},
    {"nivel_inc", T::integer, false, "Incidence relative to epidemic thresholds 0..2"},
    {"disease", T::text, false, "dengue, zika or chikungunya"},
};

constexpr ColumnSpec kClimateColumns[] = {
    {"date", T::date, false, "Day"},
    {"geocodigo", T::integer, false, "IBGE 7-digit municipality code"},
    {"temp_min", T::real, false, "Minimum temperature, degC"},
    {"temp_med", T::real, false, "Mean temperature, degC"},
    {"temp_max", T::real, false, "Maximum temperature, degC"},
    {"precip_min", T::real, false, "Minimum precipitation, mm"},
    {"precip_med", T::real, false, "Mean precipitation, mm"},
    {"precip_max", T::real, false, "Maximum precipitation, mm"},
    {"precip_tot", T::real, false, "Total precipitation, mm"},
    {"pressao_min", T::real, false, "Minimum sea level pressure, as delivered"},
    {"pressao_med", T::real, false, "Mean sea level pressure, as delivered"},
    {"pressao_max", T::real, false, "Maximum sea level pressure, as delivered"},
    {"umid_min", T::real, false, "Minimum relative humidity, percent"},
    {"umid_med", T::real, false, "Mean relative humidity, percent"},
    {"umid_max", T::real, false, "Maximum relative humidity, percent"},
};

constexpr ColumnSpec kEpiscannerColumns[] = {
    {"disease", T::text, false, "dengue, zika or chik"},
    {"CID10", T::text, true, "ICD-10 code of the disease"},
    {"year", T::integer, false, "Year analysed"},
    {"geocode", T::integer, false, "IBGE 7-digit municipality code"},
    {"muni_name", T::text, true, "Municipality name"},
    {"peak_week", T::real, true, "Estimated week of the epidemic peak"},
    {"beta", T::real, true, "Transmissibility rate"},
    {"gamma", T::real, true, "Recovery rate"},
    {"R0", T::real, false, "Basic reproduction number"},
    {"total_cases", T::integer, false, "Total cases in the year"},
    {"alpha", T::real, true, "Richards model shape parameter"},
    {"sum_res", T::real, true, "Sum of residuals of the fit"},
    {"ep_ini", T::text, false, "Estimated first week of the epidemic, YYYYWW"},
    {"ep_end", T::text, false, "Estimated last week of the epidemic, YYYYWW"},
    {"ep_dur", T::integer, false, "Estimated epidemic duration in weeks"},
};

constexpr ColumnSpec kOvitrapColumns[] = {
    {"trap_id", T::text, false, "Ovitrap identifier"},
    {"latitude", T::real, false, "Latitude, degrees"},
    {"longitude", T::real, false, "Longitude, degrees"},
    {"install_date", T::date, false, "Day the trap was installed"},
    {"collection_date", T::date, false, "Day the trap was collected"},
    {"epi_week", T::epiweek, false, "Epidemiological week of the collection, YYYYWW"},
    {"year", T::integer, false, "Year of the collection"},
    {"egg_count", T::integer, false, "Eggs counted"},
    {"status", T::text, false, "positive when eggs were found, else negative"},
    {"geocode", T::integer, false, "IBGE 7-digit municipality code"},
};

}  // namespace

std::string_view to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::infodengue: return "infodengue";
        case DatasetKind::climate: return "climate";
        case DatasetKind::episcanner: return "episcanner";
        case DatasetKind::ovitrap: return "ovitrap";
    }
    return "infodengue";
}

std::optional<DatasetKind> parse_dataset_kind(std::string_view text) {
    for (auto k : kAllKinds) {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

std::span<const ColumnSpec> columns_of(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::infodengue: return kInfodengueColumns;
        case DatasetKind::climate: return kClimateColumns;
        case DatasetKind::episcanner: return kEpiscannerColumns;
        case DatasetKind::ovitrap: return kOvitrapColumns;
    }
    return {};
}

DatasetKind kind_of(const DatasetRecord& record) {
    return static_cast<DatasetKind>(record.index());
}

nlohmann::json record_to_json(const DatasetRecord& record) {
    return std::visit([](const auto& r) { return nlohmann::json(r); }, record);
}

DatasetRecord record_from_json(DatasetKind kind, const nlohmann::json& j) {
    switch (kind) {
        case DatasetKind::infodengue: return j.get<CaseWeekRecord>();
        case DatasetKind::climate: return j.get<ClimateDayRecord>();
        case DatasetKind::episcanner: return j.get<EpidemicParamsRecord>();
        case DatasetKind::ovitrap: return j.get<OvitrapRecord>();
    }
    throw std::invalid_argument("unknown dataset kind");
}

std::vector<std::string> csv_header(DatasetKind kind) {
    std::vector<std::string> out;
    for (const auto& c : columns_of(kind)) out.emplace_back(c.name);
    return out;
}

std::vector<std::string> csv_fields(DatasetKind kind, const nlohmann::json& item) {
    std::vector<std::string> out;
    for (const auto& c : columns_of(kind)) {
        auto it = item.find(c.name);
        if (it == item.end() || it->is_null()) {
            out.emplace_back();
        } else if (it->is_string()) {
            out.push_back(it->get<std::string>());
        } else {
            out.push_back(it->dump());
        }
    }
    return out;
}

std::vector<std::string> disease_aliases(Disease disease) {
    if (disease == Disease::chikungunya) return {"chikungunya", "chik"};
    return {std::string{to_string(disease)}};
}

}  // namespace arbohub::datastore
