#include "arbohub/service/server.hpp"

#include <spdlog/spdlog.h>

#include <charconv>
#include <chrono>
#include <cstdlib>

#include "arbohub/domain/geo.hpp"
#include "arbohub/scoring/gaussian.hpp"
#include "arbohub/service/api_error.hpp"
#include "arbohub/service/routes.hpp"
#include "httplib.h"

namespace arbohub::service {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

thread_local Clock::time_point request_started;

std::optional<std::int64_t> parse_int(std::string_view text) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

void write_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void write_error(httplib::Response& res, const ApiError& error) {
    write_json(res, error.status, to_json(error));
}

std::string_view reason_code(int status) {
    switch (status) {
        case 400: return "bad_request";
        case 401: return "unauthorized";
        case 403: return "forbidden";
        case 404: return "not_found";
        case 405: return "method_not_allowed";
        case 409: return "conflict";
        case 413: return "payload_too_large";
        case 422: return "validation_error";
        default: return status >= 500 ? "internal_error" : "error";
    }
}

json parse_body(const httplib::Request& req) {
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw ApiException(bad_request(std::string{"request body is not valid JSON: "} + e.what()));
    }
}

std::int64_t path_id(const httplib::Request& req, const std::string& what) {
    const auto id = parse_int(req.matches[1].str());
    if (!id || *id < 1) throw ApiException(not_found("no " + what + " with id " + req.matches[1].str()));
    return *id;
}

std::optional<std::string> get(const std::map<std::string, std::string>& q, const char* name) {
    if (auto it = q.find(name); it != q.end()) return it->second;
    return std::nullopt;
}

QueryPairs query_pairs(const httplib::Request& req) {
    return {req.params.begin(), req.params.end()};
}

}  // namespace

std::pair<std::string, int> parse_bind_addr(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("bind address must be host:port");
    const auto port = parse_int(std::string_view{text}.substr(colon + 1));
    if (!port || *port < 0 || *port > 65535) {
        throw std::invalid_argument("bind address has an invalid port: " + text);
    }
    std::string host = text.substr(0, colon);
    if (host.empty()) host = "0.0.0.0";
    return {host, static_cast<int>(*port)};
}

ServerConfig config_from_env(ServerConfig base) {
    if (const char* v = std::getenv("ARBOHUB_BIND_ADDR"); v && *v) {
        std::tie(base.host, base.port) = parse_bind_addr(v);
    }
    if (const char* v = std::getenv("ARBOHUB_DATA_DIR"); v && *v) base.data_dir = v;
    if (const char* v = std::getenv("ARBOHUB_MAX_PER_PAGE"); v && *v) {
        const auto n = parse_int(v);
        if (!n || *n < 1) throw std::invalid_argument("ARBOHUB_MAX_PER_PAGE must be a positive integer");
        base.max_per_page = *n;
    }
    if (const char* v = std::getenv("ARBOHUB_OBSERVED_COLUMN"); v && *v) {
        const auto c = datastore::parse_observed_column(v);
        if (!c) throw std::invalid_argument("ARBOHUB_OBSERVED_COLUMN must be casos or casos_est");
        base.observed_column = *c;
    }
    if (const char* v = std::getenv("ARBOHUB_DASHBOARD_DIR"); v && *v) base.dashboard_dir = v;
    return base;
}

std::filesystem::path datasets_db(const std::filesystem::path& data_dir) {
    return data_dir / "datasets.db";
}

std::filesystem::path registry_db(const std::filesystem::path& data_dir) {
    return data_dir / "registry.db";
}

ApiServer::ApiServer(ServerConfig config)
    : config_(std::move(config)), http_(std::make_unique<httplib::Server>()) {
    std::filesystem::create_directories(config_.data_dir);
    datasets_ = std::make_shared<datastore::SqliteDatasetStore>(
        std::make_shared<datastore::sql::ConnectionPool>(datasets_db(config_.data_dir),
                                                         config_.db_connections));
    registry_ = std::make_shared<RegistryStore>(std::make_shared<datastore::sql::ConnectionPool>(
        registry_db(config_.data_dir), config_.db_connections));
    install_routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind() {
    port_ = config_.port == 0 ? http_->bind_to_any_port(config_.host)
                              : (http_->bind_to_port(config_.host, config_.port) ? config_.port : -1);
    if (port_ < 0) {
        throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
    }
    return port_;
}

void ApiServer::run() {
    spdlog::info("listening on {}:{}", config_.host, port_);
    http_->listen_after_bind();
}

void ApiServer::wait_until_ready() const { http_->wait_until_ready(); }

void ApiServer::stop() {
    if (http_ && http_->is_running()) http_->stop();
}

void ApiServer::install_routes() {
    http_->set_payload_max_length(64u << 20);
    http_->set_pre_routing_handler([](const httplib::Request&, httplib::Response&) {
        request_started = Clock::now();
        return httplib::Server::HandlerResponse::Unhandled;
    });
    http_->set_logger([](const httplib::Request& req, const httplib::Response& res) {
        const auto ms =
            std::chrono::duration<double, std::milli>(Clock::now() - request_started).count();
        spdlog::info("{} {} {} {:.1f}ms", req.method, req.path, res.status, ms);
    });
    http_->set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
        ApiError e{res.status, std::string{reason_code(res.status)}, "", {}};
        if (res.status == 404) {
            e.code = "route_not_found";
            e.message = "no route for " + req.method + " " + req.path;
        } else {
            e.message = httplib::status_message(res.status);
        }
        res.set_content(to_json(e).dump(), "application/json");
        return httplib::Server::HandlerResponse::Handled;
    });
    http_->set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string what = "unexpected error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                what = e.what();
            } catch (...) {
            }
            spdlog::error("unhandled exception: {}", what);
            write_error(res, {500, "internal_error", what, {}});
        });

    const std::map<std::string, Handler> handlers{
        {"list_dataset", &ApiServer::list_dataset},
        {"create_model", &ApiServer::create_model},
        {"list_models", &ApiServer::list_models},
        {"get_model", &ApiServer::get_model},
        {"create_prediction", &ApiServer::create_prediction},
        {"list_predictions", &ApiServer::list_predictions},
        {"get_prediction", &ApiServer::get_prediction},
        {"score_prediction", &ApiServer::score_prediction},
        {"openapi", &ApiServer::openapi},
    };
    for (const auto& route : route_table()) {
        auto it = handlers.find(route.operation_id);
        if (it == handlers.end()) {
            throw std::logic_error("no handler for operation " + route.operation_id);
        }
        const Handler handler = it->second;
        const RouteSpec* spec = &route;
        auto wrapped = [this, handler, spec](const httplib::Request& req, httplib::Response& res) {
            try {
                Context ctx;
                if (spec->auth) {
                    if (!req.has_header("X-API-Key")) {
                        throw ApiException(unauthorized("missing X-API-Key header"));
                    }
                    ctx.account = authenticate(req);
                    if (!ctx.account) throw ApiException(unauthorized("invalid or inactive API key"));
                }
                if (spec->generic_query) {
                    auto checked = check_query(*spec, query_pairs(req));
                    if (!checked.ok()) throw ApiException(unprocessable(checked.errors));
                    ctx.query = std::move(*checked.value);
                }
                (this->*handler)(req, res, ctx);
            } catch (const ApiException& e) {
                write_error(res, e.error());
            } catch (const ValidationFailure& e) {
                write_error(res, unprocessable(e.errors()));
            }
        };
        const auto pattern = path_regex(route.path);
        if (route.method == "GET") {
            http_->Get(pattern, wrapped);
        } else if (route.method == "POST") {
            http_->Post(pattern, wrapped);
        } else {
            throw std::logic_error("unsupported method " + route.method);
        }
    }
    if (config_.dashboard_dir) {
        if (!http_->set_mount_point("/dashboard", config_.dashboard_dir->string())) {
            spdlog::warn("dashboard directory {} not found; /dashboard disabled",
                         config_.dashboard_dir->string());
        }
    }
}

std::optional<Account> ApiServer::authenticate(const httplib::Request& req) const {
    return registry_->authenticate(req.get_header_value("X-API-Key"));
}

datastore::PageRequest ApiServer::page_request(const std::map<std::string, std::string>& q) const {
    datastore::PageRequest page;
    if (auto v = get(q, "page")) page.page = *parse_int(*v);
    if (auto v = get(q, "per_page")) {
        page.per_page = *parse_int(*v);
    } else {
        page.per_page = std::min(page.per_page, config_.max_per_page);
    }
    if (page.per_page > config_.max_per_page) {
        throw ApiException(unprocessable(
            {{"per_page", "must be between 1 and " + std::to_string(config_.max_per_page),
              std::nullopt}}));
    }
    return page;
}

void ApiServer::list_dataset(const httplib::Request& req, httplib::Response& res, const Context&) {
    const auto name = req.matches[1].str();
    const auto kind = datastore::parse_dataset_kind(name);
    if (!kind) throw ApiException(not_found("unknown dataset '" + name + "'"));
    auto query = datastore::parse_dataset_query(*kind, query_pairs(req), config_.max_per_page);
    if (!query.ok()) throw ApiException(unprocessable(query.errors));
    const auto page = datasets_->query(*kind, query.value->filters, query.value->page);
    write_json(res, 200, datastore::page_envelope(page, datastore::record_to_json));
}

void ApiServer::create_model(const httplib::Request& req, httplib::Response& res,
                             const Context& ctx) {
    const auto body = parse_body(req);
    auto checked = validate_model_meta(body);
    if (!checked.ok()) throw ApiException(unprocessable(checked.errors));
    checked.value->owner = ctx.account->id;
    const auto stored = registry_->insert_model(std::move(*checked.value));
    write_json(res, 201, to_json(stored));
}

void ApiServer::list_models(const httplib::Request&, httplib::Response& res, const Context& ctx) {
    ModelFilters f;
    f.name = get(ctx.query, "name");
    if (auto v = get(ctx.query, "disease")) f.disease = parse_disease(*v);
    if (auto v = get(ctx.query, "adm_level")) f.adm_level = adm_level_from_int(*parse_int(*v));
    if (auto v = get(ctx.query, "time_resolution")) f.time_resolution = parse_time_resolution(*v);
    if (auto v = get(ctx.query, "sprint")) f.sprint = *v == "true";
    const auto page = registry_->models(f, page_request(ctx.query));
    write_json(res, 200, datastore::page_envelope(page, [](const ModelRecord& m) {
                   return to_json(m);
               }));
}

void ApiServer::get_model(const httplib::Request& req, httplib::Response& res, const Context&) {
    const auto id = path_id(req, "model");
    const auto model = registry_->model(id);
    if (!model) throw ApiException(not_found("no model with id " + std::to_string(id)));
    write_json(res, 200, to_json(*model));
}

void ApiServer::create_prediction(const httplib::Request& req, httplib::Response& res,
                                  const Context& ctx) {
    const auto body = parse_body(req);
    const auto model_field = body.is_object() ? body.find("model") : body.end();
    if (model_field == body.end() || !model_field->is_number_integer() ||
        model_field->get<std::int64_t>() < 1) {
        auto pre = prevalidate_prediction(body);
        auto errors = pre.errors;
        if (errors.empty()) errors.push_back({"model", "must be a positive integer model id", std::nullopt});
        throw ApiException(unprocessable(std::move(errors)));
    }
    const auto model_id = model_field->get<std::int64_t>();
    const auto model = registry_->model(model_id);
    if (!model) throw ApiException(not_found("no model with id " + std::to_string(model_id)));
    if (model->owner != ctx.account->id) {
        throw ApiException(forbidden("model " + std::to_string(model_id) +
                                     " belongs to another account"));
    }
    auto checked = validate_prediction(body, *model);
    if (!checked.ok()) throw ApiException(unprocessable(checked.errors));
    const auto id = registry_->insert_prediction(std::move(*checked.value));
    write_json(res, 201, {{"id", id}});
}

void ApiServer::list_predictions(const httplib::Request&, httplib::Response& res,
                                 const Context& ctx) {
    PredictionFilters f;
    ValidationErrors errors;
    if (auto v = get(ctx.query, "model_id")) f.model_id = parse_int(*v);
    if (auto v = get(ctx.query, "disease")) f.disease = parse_disease(*v);
    if (auto v = get(ctx.query, "adm_1")) {
        f.adm_1 = geo::normalize_uf(*v);
        if (!f.adm_1) errors.push_back({"adm_1", "must be a UF or a 2-digit state code", std::nullopt});
    }
    if (auto v = get(ctx.query, "start")) f.start = CivilDate::parse(*v);
    if (auto v = get(ctx.query, "end")) f.end = CivilDate::parse(*v);
    if (f.start && f.end && *f.start > *f.end) {
        errors.push_back({"start", "must not be after end", std::nullopt});
    }
    if (!errors.empty()) throw ApiException(unprocessable(std::move(errors)));
    const auto page = registry_->predictions(f, page_request(ctx.query));
    write_json(res, 200, datastore::page_envelope(page, [](const PredictionRecord& p) {
                   return to_json(p);
               }));
}

void ApiServer::get_prediction(const httplib::Request& req, httplib::Response& res,
                               const Context&) {
    const auto id = path_id(req, "prediction");
    const auto prediction = registry_->prediction(id);
    if (!prediction) throw ApiException(not_found("no prediction with id " + std::to_string(id)));
    write_json(res, 200, to_json(*prediction));
}

void ApiServer::score_prediction(const httplib::Request& req, httplib::Response& res,
                                 const Context& ctx) {
    const auto id = path_id(req, "prediction");
    const auto prediction = registry_->prediction(id);
    if (!prediction) throw ApiException(not_found("no prediction with id " + std::to_string(id)));
    std::optional<scoring::Metric> metric;
    if (auto v = get(ctx.query, "metric")) metric = scoring::parse_metric(*v);
    datastore::ScoreWindow window;
    if (auto v = get(ctx.query, "start")) window.start = CivilDate::parse(*v);
    if (auto v = get(ctx.query, "end")) window.end = CivilDate::parse(*v);
    if (window.start && window.end && *window.start > *window.end) {
        throw ApiException(unprocessable({{"start", "must not be after end", std::nullopt}}));
    }
    const auto model = registry_->model(prediction->model);
    if (!model) throw ApiException(not_found("model of prediction " + std::to_string(id) + " is gone"));
    try {
        const auto report = datastore::score_against_store(*datasets_, *prediction, *model, window,
                                                           config_.observed_column);
        write_json(res, 200, scoring::to_json(report, metric));
    } catch (const scoring::ScoringError& e) {
        if (e.code() != scoring::ScoringErrc::no_overlap) throw;
        throw ApiException(conflict("no_overlap", e.what()));
    } catch (const datastore::UnknownAdmKey& e) {
        throw ApiException(conflict("no_overlap", e.what()));
    }
}

void ApiServer::openapi(const httplib::Request&, httplib::Response& res, const Context&) {
    static const json document = openapi_document(route_table());
    write_json(res, 200, document);
}

}  // namespace arbohub::service
