#include "arbohub/service/routes.hpp"

#include <charconv>
#include <set>

#include "arbohub/datastore/records.hpp"
#include "arbohub/domain/civil_date.hpp"
#include "arbohub/domain/model.hpp"
#include "arbohub/domain/prediction.hpp"
#include "arbohub/scoring/score_report.hpp"

namespace arbohub::service {

namespace {

ParamSpec query(std::string name, ParamType type, std::string description,
                std::vector<std::string> values = {}) {
    return {std::move(name), "query", type, false, std::move(description), std::move(values),
            std::nullopt};
}

ParamSpec id_param(std::string description) {
    return {"id", "path", ParamType::integer, true, std::move(description), {}, 1};
}

std::vector<ParamSpec> paging() {
    auto page = query("page", ParamType::integer, "1-based page number");
    page.minimum = 1;
    auto per_page = query("per_page", ParamType::integer, "items per page, default 100");
    per_page.minimum = 1;
    return {page, per_page};
}

template <class Names>
std::vector<std::string> strings(const Names& names) {
    return {names.begin(), names.end()};
}

const std::vector<std::string> kDiseases{"dengue", "zika", "chikungunya"};

RouteSpec route(std::string operation_id, std::string method, std::string path,
                std::string summary, bool auth = false, bool generic_query = true) {
    RouteSpec r;
    r.operation_id = std::move(operation_id);
    r.method = std::move(method);
    r.path = std::move(path);
    r.summary = std::move(summary);
    r.auth = auth;
    r.generic_query = generic_query;
    return r;
}

std::vector<RouteSpec> build_routes() {
    std::vector<RouteSpec> routes;

    {
        auto r = route("list_dataset", "GET", "/api/datastore/{kind}",
                    "Page through one observed dataset. No key required.", false, false);
        std::vector<std::string> kinds;
        for (auto k : datastore::kAllKinds) kinds.emplace_back(datastore::to_string(k));
        r.params.push_back({"kind", "path", ParamType::enumeration, true, "dataset", kinds, {}});
        r.params.push_back(query("disease", ParamType::enumeration,
                                 "infodengue and episcanner only", kDiseases));
        r.params.push_back(query("geocode", ParamType::integer, "7-digit municipality geocode"));
        r.params.push_back(query("uf", ParamType::string, "state, as UF letters or 2-digit code"));
        r.params.push_back(query("start", ParamType::date, "inclusive lower date bound"));
        r.params.push_back(query("end", ParamType::date, "inclusive upper date bound"));
        for (auto& p : paging()) r.params.push_back(p);
        r.responses = {{200, "one page of records", "DatasetPage"},
                       {404, "unknown dataset", "ApiError"},
                       {422, "invalid filter or paging", "ApiError"}};
        routes.push_back(std::move(r));
    }
    {
        auto r = route("create_model", "POST", "/api/registry/models", "Register a model.", true);
        r.request_schema = "ModelInput";
        r.responses = {{201, "registered model", "Model"},
                       {400, "body is not JSON", "ApiError"},
                       {401, "missing or invalid key", "ApiError"},
                       {422, "every invalid field", "ApiError"}};
        routes.push_back(std::move(r));
    }
    {
        auto r = route("list_models", "GET", "/api/registry/models", "Search registered models.");
        r.params = {
            query("name", ParamType::string, "case-insensitive substring of the name"),
            query("disease", ParamType::enumeration, "disease", kDiseases),
            query("adm_level", ParamType::enumeration, "spatial level", {"0", "1", "2", "3"}),
            query("time_resolution", ParamType::enumeration, "time step",
                  {"day", "week", "month", "year"}),
            query("sprint", ParamType::boolean, "sprint models only, or none of them"),
        };
        for (auto& p : paging()) r.params.push_back(p);
        r.responses = {{200, "one page of models", "ModelPage"},
                       {422, "invalid filter or paging", "ApiError"}};
        routes.push_back(std::move(r));
    }
    {
        auto r = route("get_model", "GET", "/api/registry/models/{id}", "Fetch one model.");
        r.params = {id_param("model id")};
        r.responses = {{200, "the model", "Model"}, {404, "no such model", "ApiError"}};
        routes.push_back(std::move(r));
    }
    {
        auto r = route("create_prediction", "POST", "/api/registry/predictions",
                    "Upload a prediction for a model owned by the caller.", true);
        r.request_schema = "PredictionInput";
        r.responses = {{201, "stored prediction id", "Created"},
                       {400, "body is not JSON", "ApiError"},
                       {401, "missing or invalid key", "ApiError"},
                       {403, "model belongs to another account", "ApiError"},
                       {404, "no such model", "ApiError"},
                       {422, "every invalid field, rows indexed", "ApiError"}};
        routes.push_back(std::move(r));
    }
    {
        auto r = route("list_predictions", "GET", "/api/registry/predictions",
                    "Search uploaded predictions.");
        auto model_id = query("model_id", ParamType::integer, "model id");
        model_id.minimum = 1;
        r.params = {model_id,
                    query("disease", ParamType::enumeration, "disease of the model", kDiseases),
                    query("adm_1", ParamType::string, "state of at least one row"),
                    query("start", ParamType::date, "some row dated on or after"),
                    query("end", ParamType::date, "some row dated on or before")};
        for (auto& p : paging()) r.params.push_back(p);
        r.responses = {{200, "one page of predictions", "PredictionPage"},
                       {422, "invalid filter or paging", "ApiError"}};
        routes.push_back(std::move(r));
    }
    {
        auto r = route("get_prediction", "GET", "/api/registry/predictions/{id}",
                    "Fetch one prediction with its rows.");
        r.params = {id_param("prediction id")};
        r.responses = {{200, "the prediction", "Prediction"},
                       {404, "no such prediction", "ApiError"}};
        routes.push_back(std::move(r));
    }
    {
        auto r = route("score_prediction", "GET", "/api/registry/predictions/{id}/score",
                    "Score a prediction against the stored observed cases.");
        std::vector<std::string> metrics;
        for (auto m : scoring::kAllMetrics) metrics.emplace_back(scoring::to_string(m));
        r.params = {id_param("prediction id"),
                    query("metric", ParamType::enumeration, "report one metric only", metrics),
                    query("start", ParamType::date, "ignore rows dated before"),
                    query("end", ParamType::date, "ignore rows dated after")};
        r.responses = {{200, "scores and join diagnostics", "ScoreReport"},
                       {404, "no such prediction", "ApiError"},
                       {409, "no prediction row matches an observation", "ApiError"},
                       {422, "invalid parameter", "ApiError"}};
        routes.push_back(std::move(r));
    }
    {
        auto r = route("openapi", "GET", "/api/openapi", "This document.");
        r.responses = {{200, "OpenAPI 3 description", ""}};
        routes.push_back(std::move(r));
    }
    return routes;
}

std::optional<long long> parse_integer(const std::string& s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

const std::vector<RouteSpec>& route_table() {
    static const std::vector<RouteSpec> routes = build_routes();
    return routes;
}

std::string path_regex(std::string_view path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path[i] == '{') {
            i = path.find('}', i);
            out += "([^/]+)";
        } else {
            out += path[i];
        }
    }
    return out + "/?";
}

Validated<std::map<std::string, std::string>> check_query(const RouteSpec& route,
                                                          const QueryPairs& pairs) {
    Validated<std::map<std::string, std::string>> out;
    std::map<std::string, std::string> accepted;
    std::set<std::string> repeated;
    for (const auto& [name, value] : pairs) {
        auto spec = std::find_if(route.params.begin(), route.params.end(), [&](const ParamSpec& p) {
            return p.in == "query" && p.name == name;
        });
        if (spec == route.params.end()) {
            out.errors.push_back({name, "unknown parameter", std::nullopt});
            continue;
        }
        if (accepted.contains(name)) {
            if (repeated.insert(name).second) {
                out.errors.push_back({name, "given more than once", std::nullopt});
            }
            continue;
        }
        accepted[name] = value;
        switch (spec->type) {
            case ParamType::string:
                if (value.empty()) out.errors.push_back({name, "must not be empty", std::nullopt});
                break;
            case ParamType::integer: {
                auto v = parse_integer(value);
                if (!v) {
                    out.errors.push_back({name, "must be an integer", std::nullopt});
                } else if (spec->minimum && *v < *spec->minimum) {
                    out.errors.push_back(
                        {name, "must be >= " + std::to_string(*spec->minimum), std::nullopt});
                }
                break;
            }
            case ParamType::boolean:
                if (value != "true" && value != "false") {
                    out.errors.push_back({name, "must be true or false", std::nullopt});
                }
                break;
            case ParamType::date:
                if (!CivilDate::parse(value)) {
                    out.errors.push_back({name, "must be a YYYY-mm-dd date", std::nullopt});
                }
                break;
            case ParamType::enumeration:
                if (std::find(spec->values.begin(), spec->values.end(), value) ==
                    spec->values.end()) {
                    std::string allowed;
                    for (const auto& v : spec->values) allowed += (allowed.empty() ? "" : ", ") + v;
                    out.errors.push_back({name, "must be one of " + allowed, std::nullopt});
                }
                break;
        }
    }
    if (out.errors.empty()) out.value = std::move(accepted);
    return out;
}

namespace {

using nlohmann::json;

json ref(const std::string& name) { return {{"$ref", "#/components/schemas/" + name}}; }

json param_schema(const ParamSpec& p) {
    switch (p.type) {
        case ParamType::string: return {{"type", "string"}};
        case ParamType::integer: {
            json s{{"type", "integer"}};
            if (p.minimum) s["minimum"] = *p.minimum;
            return s;
        }
        case ParamType::boolean: return {{"type", "boolean"}};
        case ParamType::date: return {{"type", "string"}, {"format", "date"}};
        case ParamType::enumeration: return {{"type", "string"}, {"enum", p.values}};
    }
    return {};
}

json column_schema(datastore::ColumnType type, bool nullable) {
    json s;
    switch (type) {
        case datastore::ColumnType::date: s = {{"type", "string"}, {"format", "date"}}; break;
        case datastore::ColumnType::epiweek:
            s = {{"type", "integer"}, {"description", "YYYYWW"}};
            break;
        case datastore::ColumnType::integer: s = {{"type", "integer"}}; break;
        case datastore::ColumnType::real: s = {{"type", "number"}}; break;
        case datastore::ColumnType::text: s = {{"type", "string"}}; break;
    }
    if (nullable) s["nullable"] = true;
    return s;
}

json page_of(const std::string& item) {
    return {{"type", "object"},
            {"required", {"items", "pagination"}},
            {"properties",
             {{"items", {{"type", "array"}, {"items", ref(item)}}},
              {"pagination", ref("Pagination")}}}};
}

json schemas() {
    json s;
    s["ApiError"] = {
        {"type", "object"},
        {"required", {"status", "code", "message", "details"}},
        {"properties",
         {{"status", {{"type", "integer"}}},
          {"code", {{"type", "string"}}},
          {"message", {{"type", "string"}}},
          {"details",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"field", "reason"}},
              {"properties",
               {{"field", {{"type", "string"}}},
                {"reason", {{"type", "string"}}},
                {"row", {{"type", "integer"}, {"description", "0-based prediction row"}}}}}}}}}}}};
    s["Pagination"] = {{"type", "object"},
                       {"required", {"page", "per_page", "total_items", "total_pages"}},
                       {"properties",
                        {{"page", {{"type", "integer"}}},
                         {"per_page", {{"type", "integer"}}},
                         {"total_items", {{"type", "integer"}}},
                         {"total_pages", {{"type", "integer"}}}}}};

    json model_props{
        {"name", {{"type", "string"}, {"maxLength", 100}}},
        {"description", {{"type", "string"}}},
        {"repository", {{"type", "string"}, {"format", "uri"}}},
        {"implementation_language", {{"type", "string"}, {"enum", strings(kImplementationLanguages)}}},
        {"disease", {{"type", "string"}, {"enum", kDiseases}}},
        {"temporal", {{"type", "boolean"}}},
        {"spatial", {{"type", "boolean"}}},
        {"categorical", {{"type", "boolean"}}},
        {"adm_level", {{"type", "integer"}, {"enum", {0, 1, 2, 3}}}},
        {"time_resolution", {{"type", "string"}, {"enum", {"day", "week", "month", "year"}}}},
        {"sprint", {{"type", "boolean"}}}};
    json required{"name", "repository", "implementation_language", "disease", "temporal",
                  "spatial", "categorical", "adm_level", "time_resolution", "sprint"};
    s["ModelInput"] = {{"type", "object"},
                       {"additionalProperties", false},
                       {"required", required},
                       {"properties", model_props}};
    auto model = s["ModelInput"];
    model.erase("additionalProperties");
    model["properties"]["id"] = {{"type", "integer"}};
    model["properties"]["owner"] = {{"type", "integer"}};
    model["required"].push_back("id");
    model["required"].push_back("owner");
    s["Model"] = model;
    s["ModelPage"] = page_of("Model");

    json row_props{{"date", {{"type", "string"}, {"format", "date"}}},
                   {"pred", {{"type", "number"}}},
                   {"lower", {{"type", "number"}}},
                   {"upper", {{"type", "number"}}},
                   {"adm_0", {{"type", "string"}, {"nullable", true}}},
                   {"adm_1",
                    {{"oneOf", {{{"type", "string"}}, {{"type", "integer"}}}}, {"nullable", true}}},
                   {"adm_2", {{"type", "integer"}, {"nullable", true}}},
                   {"adm_3", {{"type", "integer"}, {"nullable", true}}}};
    for (auto col : kPredictionColumns) {
        if (!row_props.contains(std::string{col})) throw std::logic_error("row schema drift");
    }
    s["PredictionRow"] = {{"type", "object"},
                          {"additionalProperties", false},
                          {"required", {"date", "pred", "lower", "upper"}},
                          {"properties", row_props}};
    json submission_props{{"model", {{"type", "integer"}}},
                          {"description", {{"type", "string"}}},
                          {"commit", {{"type", "string"}, {"pattern", "^[0-9a-fA-F]{40}$"}}},
                          {"predict_date", {{"type", "string"}, {"format", "date"}}},
                          {"prediction", {{"type", "array"}, {"items", ref("PredictionRow")}}}};
    s["PredictionInput"] = {{"type", "object"},
                            {"additionalProperties", false},
                            {"required", {"model", "commit", "predict_date", "prediction"}},
                            {"properties", submission_props}};
    auto prediction = s["PredictionInput"];
    prediction.erase("additionalProperties");
    prediction["properties"]["id"] = {{"type", "integer"}};
    prediction["required"].push_back("id");
    s["Prediction"] = prediction;
    s["PredictionPage"] = page_of("Prediction");
    s["Created"] = {{"type", "object"},
                    {"required", {"id"}},
                    {"properties", {{"id", {{"type", "integer"}}}}}};

    json scores;
    for (auto m : scoring::kAllMetrics) scores[std::string{scoring::to_string(m)}] = {{"type", "number"}};
    s["ScoreReport"] = {
        {"type", "object"},
        {"required", {"prediction_id", "scores", "orientation", "n_matched", "n_unmatched"}},
        {"properties",
         {{"prediction_id", {{"type", "integer"}}},
          {"scores", {{"type", "object"}, {"properties", scores}}},
          {"orientation",
           {{"type", "object"},
            {"additionalProperties",
             {{"type", "string"}, {"enum", {"lower_is_better", "higher_is_better"}}}}}},
          {"n_matched", {{"type", "integer"}}},
          {"n_unmatched", {{"type", "integer"}}},
          {"matched_range",
           {{"type", "object"},
            {"properties",
             {{"start", {{"type", "string"}, {"format", "date"}}},
              {"end", {{"type", "string"}, {"format", "date"}}}}}}},
          {"unmatched",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"properties",
               {{"row", {{"type", "integer"}}}, {"reason", {{"type", "string"}}}}}}}}}}}};

    json one_of = json::array();
    for (auto kind : datastore::kAllKinds) {
        json props;
        json req = json::array();
        for (const auto& col : datastore::columns_of(kind)) {
            auto c = column_schema(col.type, col.nullable);
            c["description"] = std::string{col.description};
            props[std::string{col.name}] = c;
            if (!col.nullable) req.push_back(std::string{col.name});
        }
        std::string name{datastore::to_string(kind)};
        name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        name += "Record";
        s[name] = {{"type", "object"}, {"required", req}, {"properties", props}};
        one_of.push_back(ref(name));
    }
    s["DatasetRecord"] = {{"oneOf", one_of}};
    s["DatasetPage"] = page_of("DatasetRecord");
    return s;
}

}  // namespace

json openapi_document(const std::vector<RouteSpec>& routes) {
    json paths = json::object();
    for (const auto& r : routes) {
        json op{{"operationId", r.operation_id}, {"summary", r.summary}};
        json params = json::array();
        for (const auto& p : r.params) {
            params.push_back({{"name", p.name},
                              {"in", p.in},
                              {"required", p.required},
                              {"description", p.description},
                              {"schema", param_schema(p)}});
        }
        if (!params.empty()) op["parameters"] = params;
        if (!r.request_schema.empty()) {
            op["requestBody"] = {
                {"required", true},
                {"content", {{"application/json", {{"schema", ref(r.request_schema)}}}}}};
        }
        if (r.auth) op["security"] = json::array({{{"ApiKey", json::array()}}});
        json responses;
        for (const auto& resp : r.responses) {
            json body{{"description", resp.description}};
            if (!resp.schema.empty()) {
                body["content"] = {{"application/json", {{"schema", ref(resp.schema)}}}};
            }
            responses[std::to_string(resp.status)] = body;
        }
        op["responses"] = responses;
        std::string method = r.method;
        for (auto& c : method) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        paths[r.path][method] = op;
    }
    return {{"openapi", "3.0.3"},
            {"info",
             {{"title", "ArboHub API"},
              {"version", "1.0.0"},
              {"description", "Arbovirus surveillance data, forecast registry and scoring."}}},
            {"paths", paths},
            {"components",
             {{"schemas", schemas()},
              {"securitySchemes",
               {{"ApiKey", {{"type", "apiKey"}, {"in", "header"}, {"name", "X-API-Key"}}}}}}}};
}

}  // namespace arbohub::service
