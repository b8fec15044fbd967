#include "arbohub/datastore/observations.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include "arbohub/domain/geo.hpp"

namespace arbohub::datastore {

std::string_view to_string(ObservedColumn column) {
    return column == ObservedColumn::casos ? "casos" : "casos_est";
}

std::optional<ObservedColumn> parse_observed_column(std::string_view text) {
    if (text == "casos") return ObservedColumn::casos;
    if (text == "casos_est") return ObservedColumn::casos_est;
    return std::nullopt;
}

std::string canonical_adm_key(AdmLevel level, std::string_view key) {
    switch (level) {
        case AdmLevel::national:
            if (key.size() == 2 && std::toupper(static_cast<unsigned char>(key[0])) == 'B' &&
                std::toupper(static_cast<unsigned char>(key[1])) == 'R') {
                return std::string{kNationalKey};
            }
            break;
        case AdmLevel::state:
            if (auto uf = geo::normalize_uf(key)) return *uf;
            break;
        case AdmLevel::municipality: {
            std::int64_t code = 0;
            const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), code);
            if (ec == std::errc{} && ptr == key.data() + key.size() &&
                geo::is_municipality_geocode(code)) {
                return std::to_string(code);
            }
            break;
        }
        case AdmLevel::submunicipality:
            throw UnknownAdmKey("no observed data at adm level 3");
    }
    throw UnknownAdmKey("unknown " + adm_column(level) + " key '" + std::string{key} + "'");
}

namespace {

std::string key_of(const CaseWeekRecord& r, AdmLevel level) {
    switch (level) {
        case AdmLevel::national: return std::string{kNationalKey};
        case AdmLevel::state:
            if (auto uf = geo::uf_of_geocode(r.municipio_geocodigo)) return *uf;
            throw UnknownAdmKey("geocode " + std::to_string(r.municipio_geocodigo) + " has no state");
        case AdmLevel::municipality: return std::to_string(r.municipio_geocodigo);
        case AdmLevel::submunicipality: break;
    }
    throw UnknownAdmKey("no observed data at adm level 3");
}

}  // namespace

scoring::ObservationSeries aggregate_case_weeks(std::span<const CaseWeekRecord> records,
                                                AdmLevel level, ObservedColumn column) {
    std::map<std::pair<CivilDate, std::string>, double> sums;
    for (const auto& r : records) {
        const double v = column == ObservedColumn::casos ? static_cast<double>(r.casos)
                                                         : r.casos_est;
        sums[{r.data_iniSE, key_of(r, level)}] += v;
    }
    scoring::ObservationSeries series;
    for (auto& [key, value] : sums) series.add(key.first, key.second, value);
    return series;
}

namespace {

std::vector<CaseWeekRecord> load_cases(const DatasetStore& store, const DatasetFilters& filters) {
    std::vector<CaseWeekRecord> cases;
    for (auto& rec : store.select(DatasetKind::infodengue, filters)) {
        cases.push_back(std::get<CaseWeekRecord>(std::move(rec)));
    }
    return cases;
}

}  // namespace

scoring::ObservationSeries observed_series_for(const DatasetStore& store, Disease disease,
                                               AdmLevel level, std::string_view adm_key,
                                               std::optional<CivilDate> start,
                                               std::optional<CivilDate> end,
                                               ObservedColumn column) {
    const auto key = canonical_adm_key(level, adm_key);
    DatasetFilters filters;
    filters.disease = disease;
    filters.start = start;
    filters.end = end;
    if (level == AdmLevel::state) filters.uf = key;
    if (level == AdmLevel::municipality) filters.geocode = std::stoll(key);
    const auto cases = load_cases(store, filters);
    return aggregate_case_weeks(cases, level, column);
}

scoring::ScoreReport score_with_cases(const PredictionRecord& prediction, AdmLevel level,
                                      std::span<const CaseWeekRecord> cases,
                                      const ScoreWindow& window, ObservedColumn column) {
    PredictionRecord windowed = prediction;
    windowed.rows.clear();
    std::vector<std::size_t> original;
    for (std::size_t i = 0; i < prediction.rows.size(); ++i) {
        const auto& row = prediction.rows[i];
        if (window.start && row.date < *window.start) continue;
        if (window.end && row.date > *window.end) continue;
        windowed.rows.push_back(row);
        original.push_back(i);
    }
    const auto series = aggregate_case_weeks(cases, level, column);
    auto report = scoring::score_prediction(windowed, level, series);
    for (auto& u : report.unmatched) u.row = original[u.row];
    return report;
}

scoring::ScoreReport score_against_store(const DatasetStore& store,
                                         const PredictionRecord& prediction,
                                         const ModelRecord& model, const ScoreWindow& window,
                                         ObservedColumn column) {
    if (model.adm_level == AdmLevel::submunicipality) {
        throw UnknownAdmKey("no observed data at adm level 3");
    }
    DatasetFilters filters;
    filters.disease = model.disease;
    if (!prediction.rows.empty()) {
        auto [lo, hi] = std::minmax_element(
            prediction.rows.begin(), prediction.rows.end(),
            [](const PredictionRow& a, const PredictionRow& b) { return a.date < b.date; });
        filters.start = lo->date;
        filters.end = hi->date;
    }
    if (window.start && (!filters.start || *window.start > *filters.start)) filters.start = window.start;
    if (window.end && (!filters.end || *window.end < *filters.end)) filters.end = window.end;
    std::vector<CaseWeekRecord> cases;
    if (!filters.start || !filters.end || *filters.start <= *filters.end) {
        cases = load_cases(store, filters);
    }
    return score_with_cases(prediction, model.adm_level, cases, window, column);
}

}  // namespace arbohub::datastore
