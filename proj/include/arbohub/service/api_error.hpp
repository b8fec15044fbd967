#pragma once

#include <stdexcept>
#include <string>

#include "arbohub/domain/validation.hpp"
#include "json.hpp"

namespace arbohub::service {

// Error body of every non-2xx response:
// {"status", "code", "message", "details": [{"field", "reason", "row"?}]}.
struct ApiError {
    int status = 500;
    std::string code;
    std::string message;
    ValidationErrors details;
};

nlohmann::json to_json(const ApiError& error);
ApiError api_error_from_json(const nlohmann::json& j);

class ApiException : public std::runtime_error {
public:
    explicit ApiException(ApiError error)
        : std::runtime_error(error.message), error_(std::move(error)) {}
    const ApiError& error() const noexcept { return error_; }

private:
    ApiError error_;
};

ApiError unauthorized(std::string message);
ApiError forbidden(std::string message);
ApiError not_found(std::string message);
ApiError bad_request(std::string message);
ApiError unprocessable(ValidationErrors details, std::string message = "request failed validation");
ApiError conflict(std::string code, std::string message);

}  // namespace arbohub::service
