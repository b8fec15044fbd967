#pragma once

#include <atomic>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arbohub/client/config.hpp"
#include "arbohub/service/api_error.hpp"
#include "json.hpp"

namespace arbohub::client {

using QueryPairs = std::vector<std::pair<std::string, std::string>>;

// No HTTP response after all retries.
class NetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-2xx response, with the server's error body when it sent one.
class ServerError : public std::runtime_error {
public:
    explicit ServerError(service::ApiError error)
        : std::runtime_error(std::to_string(error.status) + " " + error.code + ": " + error.message),
          error_(std::move(error)) {}
    const service::ApiError& error() const noexcept { return error_; }
    int status() const noexcept { return error_.status; }

private:
    service::ApiError error_;
};

class ApiClient {
public:
    explicit ApiClient(ClientConfig config);

    // 2xx bodies parsed as JSON; anything else throws ServerError or
    // NetworkError. Safe to call from several threads.
    nlohmann::json get(const std::string& path, const QueryPairs& query = {}) const;
    nlohmann::json post(const std::string& path, const nlohmann::json& body) const;

    const ClientConfig& config() const { return config_; }
    std::size_t requests_sent() const { return requests_.load(); }

private:
    template <class Send>
    nlohmann::json send(Send&& send_once, bool idempotent) const;

    ClientConfig config_;
    std::string origin_;  // scheme://host[:port]
    std::string prefix_;  // path prefix without trailing slash
    mutable std::atomic<std::size_t> requests_{0};
};

}  // namespace arbohub::client
