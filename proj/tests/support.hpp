#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "arbohub/datastore/csv.hpp"
#include "arbohub/datastore/dataset_store.hpp"
#include "arbohub/datastore/records.hpp"
#include "arbohub/domain/epiweek.hpp"

namespace arbohub::testing {

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("arbohub-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::shared_ptr<datastore::SqliteDatasetStore> open_store(const TempDir& dir,
                                                                 int connections = 4) {
    auto pool = std::make_shared<datastore::sql::ConnectionPool>(
        (dir.path() / "datasets.db").string(), connections);
    return std::make_shared<datastore::SqliteDatasetStore>(pool);
}

inline datastore::CaseWeekRecord case_week(std::int64_t geocode, EpiWeek week, std::int64_t casos,
                                           Disease disease = Disease::dengue) {
    datastore::CaseWeekRecord r;
    r.data_iniSE = epiweek_to_start_date(week);
    r.SE = week;
    r.casos = casos;
    r.casos_est = static_cast<double>(casos) * 1.25;
    r.municipio_geocodigo = geocode;
    r.p_rt1 = 0.5;
    r.p_inc100k = static_cast<double>(casos) / 10.0;
    r.nivel = 2;
    r.Rt = 1.1;
    r.pop = 100000;
    r.receptivo = 1;
    r.transmissao = 0;
    r.nivel_inc = 0;
    r.disease = disease;
    return r;
}

// Consecutive epidemiological weeks starting at `first`.
inline std::vector<EpiWeek> weeks_from(EpiWeek first, int count) {
    std::vector<EpiWeek> out;
    auto day = epiweek_to_start_date(first);
    for (int i = 0; i < count; ++i) {
        out.push_back(epiweek_from_date(day));
        day = day.plus_days(7);
    }
    return out;
}

inline datastore::ClimateDayRecord climate_day(CivilDate date) {
    datastore::ClimateDayRecord r;
    r.date = date;
    r.geocodigo = 3304557;
    r.temp_min = 19.5, r.temp_med = 24.25, r.temp_max = 31.0;
    r.precip_min = 0, r.precip_med = 1.5, r.precip_max = 12.0, r.precip_tot = 20.125;
    r.pressao_min = 0.998, r.pressao_med = 1.001, r.pressao_max = 1.004;
    r.umid_min = 55, r.umid_med = 70.5, r.umid_max = 96;
    return r;
}

inline datastore::EpidemicParamsRecord epi_params() {
    datastore::EpidemicParamsRecord r;
    r.disease = "chik";
    r.CID10 = "A92.0";
    r.year = 2023;
    r.geocode = 3106200;
    r.peak_week = 14.5;
    r.beta = 0.8;
    r.gamma = 0.5;
    r.R0 = 1.6;
    r.total_cases = 1234;
    r.ep_ini = "202305";
    r.ep_end = "202320";
    r.ep_dur = 16;
    return r;
}

inline datastore::OvitrapRecord trap(std::string id, std::int64_t eggs) {
    datastore::OvitrapRecord r;
    r.trap_id = std::move(id);
    r.latitude = -19.92;
    r.longitude = -43.94;
    r.install_date = *CivilDate::parse("2024-03-04");
    r.collection_date = *CivilDate::parse("2024-03-11");
    r.epi_week = epiweek_from_date(r.collection_date);
    r.year = 2024;
    r.egg_count = eggs;
    r.status = eggs > 0 ? datastore::TrapStatus::positive : datastore::TrapStatus::negative;
    r.geocode = 3106200;
    return r;
}

template <class T>
std::vector<T> records_as(const std::vector<datastore::DatasetRecord>& records) {
    std::vector<T> out;
    for (const auto& r : records) out.push_back(std::get<T>(r));
    return out;
}

template <class Records>
std::string to_csv(datastore::DatasetKind kind, const Records& records) {
    std::ostringstream out;
    datastore::write_csv_record(out, datastore::csv_header(kind));
    for (const auto& r : records) {
        datastore::write_csv_record(out, datastore::csv_fields(kind, datastore::record_to_json(r)));
    }
    return out.str();
}

}  // namespace arbohub::testing
