#include "arbohub/client/api_client.hpp"

#include <chrono>
#include <regex>
#include <thread>

#include "httplib.h"

namespace arbohub::client {

namespace {

std::string encode_query(const QueryPairs& query) {
    std::string out;
    for (const auto& [k, v] : query) {
        out += out.empty() ? "?" : "&";
        out += httplib::detail::encode_query_param(k) + "=" + httplib::detail::encode_query_param(v);
    }
    return out;
}

bool retryable_status(int status) { return status == 502 || status == 503 || status == 504; }

}  // namespace

ApiClient::ApiClient(ClientConfig config) : config_(std::move(config)) {
    check_config(config_);
    static const std::regex split(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    std::regex_match(config_.api_url, m, split);
    origin_ = m[1].str();
    prefix_ = m[2].str();
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

template <class Send>
nlohmann::json ApiClient::send(Send&& send_once, bool idempotent) const {
    httplib::Client http(origin_);
    const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout).count();
    http.set_connection_timeout(micros / 1000000, micros % 1000000);
    http.set_read_timeout(micros / 1000000, micros % 1000000);
    http.set_write_timeout(micros / 1000000, micros % 1000000);
    http.set_keep_alive(false);

    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
        ++requests_;
        httplib::Result result = send_once(http);
        if (!result) {
            last_error = httplib::to_string(result.error());
            // A POST that may have reached the server is not repeated.
            if (!idempotent && result.error() != httplib::Error::Connection) break;
            continue;
        }
        const auto& res = *result;
        if (idempotent && retryable_status(res.status) && attempt < config_.retries) continue;
        if (res.status >= 200 && res.status < 300) {
            try {
                return res.body.empty() ? nlohmann::json{} : nlohmann::json::parse(res.body);
            } catch (const nlohmann::json::parse_error&) {
                throw ServerError({res.status, "invalid_response", "response body is not JSON", {}});
            }
        }
        service::ApiError error{res.status, "http_" + std::to_string(res.status), res.body, {}};
        try {
            auto j = nlohmann::json::parse(res.body);
            if (j.is_object() && j.contains("code")) error = service::api_error_from_json(j);
            error.status = res.status;
        } catch (const nlohmann::json::exception&) {
        }
        throw ServerError(std::move(error));
    }
    throw NetworkError("cannot reach " + origin_ + ": " + last_error);
}

nlohmann::json ApiClient::get(const std::string& path, const QueryPairs& query) const {
    const auto target = prefix_ + path + encode_query(query);
    return send([&](httplib::Client& http) {
        httplib::Headers headers;
        if (config_.api_key) headers.emplace("X-API-Key", *config_.api_key);
        return http.Get(target, headers);
    }, true);
}

nlohmann::json ApiClient::post(const std::string& path, const nlohmann::json& body) const {
    const auto target = prefix_ + path;
    const auto text = body.dump();
    return send([&](httplib::Client& http) {
        httplib::Headers headers;
        if (config_.api_key) headers.emplace("X-API-Key", *config_.api_key);
        return http.Post(target, headers, text, "application/json");
    }, false);
}

}  // namespace arbohub::client
