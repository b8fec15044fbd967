#pragma once

#include <spdlog/spdlog.h>

#include <memory>
#include <sstream>
#include <thread>

#include "arbohub/client/api_client.hpp"
#include "arbohub/datastore/ingest.hpp"
#include "arbohub/service/routes.hpp"
#include "arbohub/service/server.hpp"
#include "httplib.h"
#include "support.hpp"

namespace arbohub::testing {

// A server on a free local port backed by a fresh data directory.
class LiveServer {
public:
    explicit LiveServer(service::ServerConfig config = {}) {
        spdlog::set_level(spdlog::level::warn);
        config.host = "127.0.0.1";
        config.port = 0;
        config.data_dir = dir_.path();
        server_ = std::make_unique<service::ApiServer>(config);
        port_ = server_->bind();
        thread_ = std::thread([this] { server_->run(); });
        server_->wait_until_ready();
    }
    ~LiveServer() {
        server_->stop();
        thread_.join();
    }

    int port() const { return port_; }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    service::ApiServer& server() { return *server_; }

    httplib::Client http() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(30, 0);
        return c;
    }

    client::ApiClient client(std::optional<std::string> key = std::nullopt) const {
        client::ClientConfig config;
        config.api_url = url();
        config.api_key = std::move(key);
        config.retries = 0;
        return client::ApiClient(config);
    }

    std::string issue_key(const std::string& name = "tester") {
        return server_->registry().create_account(name).token;
    }

    datastore::IngestReport ingest(datastore::DatasetKind kind, const std::string& csv) {
        std::istringstream in(csv);
        return datastore::ingest_dataset(server_->datasets(), kind, in);
    }

private:
    TempDir dir_;
    std::unique_ptr<service::ApiServer> server_;
    std::thread thread_;
    int port_ = 0;
};

inline nlohmann::json model_meta(int adm_level = 1, const std::string& disease = "dengue") {
    return {{"name", "Weekly ARIMA"},
            {"description", "seasonal baseline"},
            {"repository", "https://github.com/example/arima"},
            {"implementation_language", "Python"},
            {"disease", disease},
            {"temporal", true},
            {"spatial", false},
            {"categorical", false},
            {"adm_level", adm_level},
            {"time_resolution", "week"},
            {"sprint", false}};
}

inline const std::string kCommit = "0123456789abcdef0123456789abcdef01234567";

}  // namespace arbohub::testing

namespace arbohub::testing {

// Weekly dengue cases for two Minas Gerais municipalities over the 52 weeks
// of 2024; the state total in week w is 20 + 3w.
inline std::vector<datastore::CaseWeekRecord> mg_cases() {
    std::vector<datastore::CaseWeekRecord> out;
    for (auto week : weeks_from(EpiWeek{2024, 1}, 52)) {
        out.push_back(case_week(3106200, week, 12 + 2 * week.week));
        out.push_back(case_week(3118601, week, 8 + week.week));
    }
    return out;
}

inline double mg_total(int week) { return 20.0 + 3.0 * week; }

// One row per 2024 week for "MG": pred = state total + shift, interval
// pred +/- half_width.
inline nlohmann::json mg_rows(double shift = 0.0, double half_width = 2.0) {
    auto rows = nlohmann::json::array();
    for (auto week : weeks_from(EpiWeek{2024, 1}, 52)) {
        const double pred = mg_total(week.week) + shift;
        rows.push_back({{"date", epiweek_to_start_date(week).to_string()},
                        {"pred", pred},
                        {"lower", pred - half_width},
                        {"upper", pred + half_width},
                        {"adm_1", "MG"}});
    }
    return rows;
}

inline nlohmann::json submission(std::int64_t model, nlohmann::json rows,
                                 const std::string& commit = kCommit) {
    return {{"model", model},
            {"description", "test upload"},
            {"commit", commit},
            {"predict_date", "2023-12-30"},
            {"prediction", std::move(rows)}};
}

}  // namespace arbohub::testing
