#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "arbohub/datastore/dataset_store.hpp"
#include "arbohub/datastore/observations.hpp"
#include "arbohub/service/registry_store.hpp"

namespace httplib {
class Server;
struct Request;
struct Response;
}  // namespace httplib

namespace arbohub::service {

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8000;  // 0 picks a free port
    std::filesystem::path data_dir = "arbohub-data";
    std::int64_t max_per_page = datastore::kDefaultMaxPerPage;
    datastore::ObservedColumn observed_column = datastore::ObservedColumn::casos;
    std::optional<std::filesystem::path> dashboard_dir;
    std::size_t db_connections = 8;
};

// Reads ARBOHUB_BIND_ADDR (host:port), ARBOHUB_DATA_DIR, ARBOHUB_MAX_PER_PAGE,
// ARBOHUB_OBSERVED_COLUMN and ARBOHUB_DASHBOARD_DIR over `base`. Throws
// std::invalid_argument on malformed values.
ServerConfig config_from_env(ServerConfig base = {});

// Parses "host:port" or ":port".
std::pair<std::string, int> parse_bind_addr(const std::string& text);

// Database files for a data directory.
std::filesystem::path datasets_db(const std::filesystem::path& data_dir);
std::filesystem::path registry_db(const std::filesystem::path& data_dir);

class ApiServer {
public:
    explicit ApiServer(ServerConfig config);
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    // Binds the socket; returns the bound port. Throws on failure.
    int bind();
    // Serves until stop(). Requires bind().
    void run();
    // Blocks until run() is accepting connections.
    void wait_until_ready() const;
    void stop();

    int port() const { return port_; }
    datastore::DatasetStore& datasets() { return *datasets_; }
    RegistryStore& registry() { return *registry_; }

    // Per-request values prepared before a handler runs.
    struct Context {
        std::map<std::string, std::string> query;  // checked against the route
        std::optional<Account> account;             // set on authenticated routes
    };

private:
    using Handler = void (ApiServer::*)(const httplib::Request&, httplib::Response&,
                                        const Context&);

    void install_routes();
    std::optional<Account> authenticate(const httplib::Request& req) const;
    datastore::PageRequest page_request(const std::map<std::string, std::string>& query) const;

    void list_dataset(const httplib::Request& req, httplib::Response& res, const Context& ctx);
    void create_model(const httplib::Request& req, httplib::Response& res, const Context& ctx);
    void list_models(const httplib::Request& req, httplib::Response& res, const Context& ctx);
    void get_model(const httplib::Request& req, httplib::Response& res, const Context& ctx);
    void create_prediction(const httplib::Request& req, httplib::Response& res, const Context& ctx);
    void list_predictions(const httplib::Request& req, httplib::Response& res, const Context& ctx);
    void get_prediction(const httplib::Request& req, httplib::Response& res, const Context& ctx);
    void score_prediction(const httplib::Request& req, httplib::Response& res, const Context& ctx);
    void openapi(const httplib::Request& req, httplib::Response& res, const Context& ctx);

    ServerConfig config_;
    std::shared_ptr<datastore::SqliteDatasetStore> datasets_;
    std::shared_ptr<RegistryStore> registry_;
    std::unique_ptr<httplib::Server> http_;
    int port_ = -1;
};

}  // namespace arbohub::service
