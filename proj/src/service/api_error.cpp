#include "arbohub/service/api_error.hpp"

namespace arbohub::service {

nlohmann::json to_json(const ApiError& error) {
    return {{"status", error.status},
            {"code", error.code},
            {"message", error.message},
            {"details", arbohub::to_json(error.details)}};
}

ApiError api_error_from_json(const nlohmann::json& j) {
    ApiError e;
    e.status = j.value("status", 0);
    e.code = j.value("code", "");
    e.message = j.value("message", "");
    if (auto it = j.find("details"); it != j.end() && it->is_array()) {
        for (const auto& d : *it) {
            FieldError f{d.value("field", ""), d.value("reason", ""), std::nullopt};
            if (auto r = d.find("row"); r != d.end() && r->is_number_unsigned()) {
                f.row = r->get<std::size_t>();
            }
            e.details.push_back(std::move(f));
        }
    }
    return e;
}

ApiError unauthorized(std::string message) { return {401, "unauthorized", std::move(message), {}}; }
ApiError forbidden(std::string message) { return {403, "forbidden", std::move(message), {}}; }
ApiError not_found(std::string message) { return {404, "not_found", std::move(message), {}}; }
ApiError bad_request(std::string message) { return {400, "bad_request", std::move(message), {}}; }

ApiError unprocessable(ValidationErrors details, std::string message) {
    return {422, "validation_error", std::move(message), std::move(details)};
}

ApiError conflict(std::string code, std::string message) {
    return {409, std::move(code), std::move(message), {}};
}

}  // namespace arbohub::service
