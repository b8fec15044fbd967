#include "arbohub/domain/validation.hpp"

namespace arbohub {

nlohmann::json to_json(const FieldError& error) {
    nlohmann::json j{{"field", error.field}, {"reason", error.reason}};
    if (error.row) j["row"] = *error.row;
    return j;
}

nlohmann::json to_json(const ValidationErrors& errors) {
    auto arr = nlohmann::json::array();
    for (const auto& e : errors) arr.push_back(to_json(e));
    return arr;
}

}  // namespace arbohub
