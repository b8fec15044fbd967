#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "arbohub/datastore/ingest.hpp"
#include "arbohub/service/routes.hpp"
#include "arbohub/service/server.hpp"

using namespace arbohub;

namespace {

service::ApiServer* running_server = nullptr;

void handle_signal(int) {
    if (running_server) running_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ArboHub server and administration"};
    app.require_subcommand(1);

    std::string data_dir;
    app.add_option("--data-dir", data_dir, "data directory (default $ARBOHUB_DATA_DIR or ./arbohub-data)");

    auto* serve = app.add_subcommand("serve", "run the HTTP API");
    std::string bind;
    std::string dashboard;
    serve->add_option("--bind", bind, "host:port (default $ARBOHUB_BIND_ADDR or 127.0.0.1:8000)");
    serve->add_option("--dashboard-dir", dashboard, "static files served under /dashboard");

    auto* create = app.add_subcommand("create-account", "issue an account and API key");
    std::string account_name;
    create->add_option("name", account_name, "account name")->required();

    auto* deactivate = app.add_subcommand("deactivate-account", "revoke an account's key");
    std::int64_t account_id = 0;
    deactivate->add_option("id", account_id, "account id")->required();

    auto* ingest = app.add_subcommand("ingest", "load a dataset CSV");
    std::string kind;
    std::string file;
    std::string disease;
    ingest->add_option("kind", kind, "infodengue, climate, episcanner or ovitrap")->required();
    ingest->add_option("file", file, "CSV file, - for stdin")->required();
    ingest->add_option("--disease", disease, "disease for infodengue files without that column");

    app.add_subcommand("openapi", "print the API description");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_default_logger(spdlog::stderr_color_mt("arbohubd"));

    try {
        auto config = service::config_from_env();
        if (!data_dir.empty()) config.data_dir = data_dir;

        if (serve->parsed()) {
            if (!bind.empty()) std::tie(config.host, config.port) = service::parse_bind_addr(bind);
            if (!dashboard.empty()) config.dashboard_dir = dashboard;
            service::ApiServer server(config);
            server.bind();
            running_server = &server;
            std::signal(SIGINT, handle_signal);
            std::signal(SIGTERM, handle_signal);
            server.run();
            running_server = nullptr;
            return 0;
        }
        if (app.got_subcommand("openapi")) {
            std::cout << service::openapi_document(service::route_table()).dump(2) << '\n';
            return 0;
        }

        std::filesystem::create_directories(config.data_dir);
        if (create->parsed() || deactivate->parsed()) {
            service::RegistryStore registry(std::make_shared<datastore::sql::ConnectionPool>(
                service::registry_db(config.data_dir), 1));
            if (create->parsed()) {
                const auto issued = registry.create_account(account_name);
                std::cout << nlohmann::json{{"id", issued.account.id},
                                            {"name", issued.account.name},
                                            {"api_key", issued.token}}
                                 .dump()
                          << '\n';
                std::cerr << "store this key now; it cannot be shown again\n";
                return 0;
            }
            if (!registry.set_account_active(account_id, false)) {
                std::cerr << "no account with id " << account_id << '\n';
                return 1;
            }
            std::cout << "account " << account_id << " deactivated\n";
            return 0;
        }

        datastore::SqliteDatasetStore store(std::make_shared<datastore::sql::ConnectionPool>(
            service::datasets_db(config.data_dir), 1));
        datastore::IngestOptions options;
        if (!disease.empty()) {
            options.disease = parse_disease(disease);
            if (!options.disease) {
                std::cerr << "unknown disease '" << disease << "'\n";
                return 1;
            }
        }
        datastore::IngestReport report;
        if (file == "-") {
            report = datastore::ingest_dataset(store, kind, std::cin, options);
        } else {
            std::ifstream in(file, std::ios::binary);
            if (!in) {
                std::cerr << "cannot open " << file << '\n';
                return 1;
            }
            report = datastore::ingest_dataset(store, kind, in, options);
        }
        std::cout << datastore::to_json(report).dump() << '\n';
        return report.rejected == 0 ? 0 : 1;
    } catch (const datastore::IngestError& e) {
        std::cerr << "ingest failed: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
