#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arbohub/domain/validation.hpp"
#include "json.hpp"

namespace arbohub::service {

enum class ParamType { string, integer, boolean, date, enumeration };

struct ParamSpec {
    std::string name;
    std::string in;  // "path" or "query"
    ParamType type = ParamType::string;
    bool required = false;
    std::string description;
    std::vector<std::string> values;  // for enumeration
    std::optional<long long> minimum;
};

struct ResponseSpec {
    int status = 200;
    std::string description;
    std::string schema;  // component name; empty for none
};

// One HTTP operation. The server binds handlers by operation_id and the API
// description is generated from the same table.
struct RouteSpec {
    std::string operation_id;
    std::string method;  // "GET" or "POST"
    std::string path;    // OpenAPI form, e.g. /api/registry/models/{id}
    std::string summary;
    bool auth = false;
    // Query parameters are checked against `params` by check_query. Routes
    // that validate their own query set this to false.
    bool generic_query = true;
    std::vector<ParamSpec> params;
    std::string request_schema;
    std::vector<ResponseSpec> responses;
};

const std::vector<RouteSpec>& route_table();

// Anchored regex for a route path; each {param} captures one segment and a
// trailing slash is accepted.
std::string path_regex(std::string_view path);

using QueryPairs = std::vector<std::pair<std::string, std::string>>;

// Rejects unknown and repeated names and values that do not fit the declared
// type. Returns the accepted parameters by name.
Validated<std::map<std::string, std::string>> check_query(const RouteSpec& route,
                                                          const QueryPairs& query);

nlohmann::json openapi_document(const std::vector<RouteSpec>& routes);

}  // namespace arbohub::service
