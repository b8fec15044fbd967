#include "arbohub/domain/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace arbohub {

std::string_view to_string(Disease d) {
    switch (d) {
        case Disease::dengue: return "dengue";
        case Disease::zika: return "zika";
        case Disease::chikungunya: return "chikungunya";
    }
    return "dengue";
}

std::string_view to_string(TimeResolution r) {
    switch (r) {
        case TimeResolution::day: return "day";
        case TimeResolution::week: return "week";
        case TimeResolution::month: return "month";
        case TimeResolution::year: return "year";
    }
    return "week";
}

std::optional<Disease> parse_disease(std::string_view text) {
    if (text == "dengue") return Disease::dengue;
    if (text == "zika") return Disease::zika;
    if (text == "chikungunya") return Disease::chikungunya;
    return std::nullopt;
}

std::optional<TimeResolution> parse_time_resolution(std::string_view text) {
    if (text == "day") return TimeResolution::day;
    if (text == "week") return TimeResolution::week;
    if (text == "month") return TimeResolution::month;
    if (text == "year") return TimeResolution::year;
    return std::nullopt;
}

std::optional<AdmLevel> adm_level_from_int(long level) {
    if (level < 0 || level > 3) return std::nullopt;
    return static_cast<AdmLevel>(level);
}

std::string adm_column(AdmLevel level) { return "adm_" + std::to_string(to_int(level)); }

namespace {

std::size_t utf8_length(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Returns a reason string when the URL is unacceptable.
std::optional<std::string> check_repository_url(std::string_view url,
                                                const std::vector<std::string>& hosts) {
    const auto sep = url.find("://");
    if (sep == std::string_view::npos || sep == 0) return "not an absolute URL";
    const std::string scheme = lower(url.substr(0, sep));
    if (scheme != "https" && scheme != "http") return "scheme must be http or https";
    std::string_view rest = url.substr(sep + 3);
    const auto end = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, end);
    if (authority.empty()) return "URL has no host";
    if (authority.find('@') != std::string_view::npos) return "credentials are not allowed in URL";
    if (auto colon = authority.find(':'); colon != std::string_view::npos) {
        const auto port = authority.substr(colon + 1);
        if (port.empty() || !std::all_of(port.begin(), port.end(),
                                         [](unsigned char c) { return std::isdigit(c); })) {
            return "malformed port";
        }
        authority = authority.substr(0, colon);
    }
    const std::string host = lower(authority);
    if (std::find(hosts.begin(), hosts.end(), host) == hosts.end()) {
        return "host '" + host + "' is not an allowed public git host";
    }
    std::string_view path = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
    if (path.empty() || path[0] != '/' || path.find_first_not_of('/') == std::string_view::npos) {
        return "URL does not name a repository";
    }
    return std::nullopt;
}

const std::set<std::string, std::less<>> kModelFields{
    "name",   "description", "repository", "implementation_language", "disease", "temporal",
    "spatial", "categorical", "adm_level", "time_resolution",         "sprint"};

}  // namespace

Validated<ModelRecord> validate_model_meta(const nlohmann::json& candidate,
                                           const ModelValidationOptions& options) {
    Validated<ModelRecord> out;
    auto& errors = out.errors;
    if (!candidate.is_object()) {
        errors.push_back({"", "body must be a JSON object", std::nullopt});
        return out;
    }
    for (const auto& [key, _] : candidate.items()) {
        if (!kModelFields.contains(key)) errors.push_back({key, "unknown field", std::nullopt});
    }

    ModelRecord m;
    auto string_field = [&](const char* name, bool required) -> std::optional<std::string> {
        auto it = candidate.find(name);
        if (it == candidate.end() || it->is_null()) {
            if (required) errors.push_back({name, "required field missing", std::nullopt});
            return std::nullopt;
        }
        if (!it->is_string()) {
            errors.push_back({name, "must be a string", std::nullopt});
            return std::nullopt;
        }
        return it->get<std::string>();
    };
    auto bool_field = [&](const char* name, bool& dest) {
        auto it = candidate.find(name);
        if (it == candidate.end() || it->is_null()) {
            errors.push_back({name, "required field missing", std::nullopt});
        } else if (!it->is_boolean()) {
            errors.push_back({name, "must be a boolean", std::nullopt});
        } else {
            dest = it->get<bool>();
        }
    };

    if (auto name = string_field("name", true)) {
        if (name->find_first_not_of(" \t\r\n") == std::string::npos) {
            errors.push_back({"name", "must not be empty", std::nullopt});
        } else if (utf8_length(*name) > kMaxModelNameLength) {
            errors.push_back({"name", "longer than 100 characters", std::nullopt});
        } else {
            m.name = *name;
        }
    }
    if (auto description = string_field("description", false)) m.description = *description;
    if (auto repo = string_field("repository", true)) {
        if (auto reason = check_repository_url(*repo, options.allowed_repository_hosts)) {
            errors.push_back({"repository", *reason, std::nullopt});
        } else {
            m.repository = *repo;
        }
    }
    if (auto lang = string_field("implementation_language", true)) {
        if (std::find(kImplementationLanguages.begin(), kImplementationLanguages.end(), *lang) ==
            kImplementationLanguages.end()) {
            errors.push_back({"implementation_language", "'" + *lang + "' is not a listed language",
                              std::nullopt});
        } else {
            m.implementation_language = *lang;
        }
    }
    if (auto disease = string_field("disease", true)) {
        if (auto d = parse_disease(*disease)) {
            m.disease = *d;
        } else {
            errors.push_back(
                {"disease", "must be one of dengue, zika, chikungunya", std::nullopt});
        }
    }
    if (auto res = string_field("time_resolution", true)) {
        if (auto r = parse_time_resolution(*res)) {
            m.time_resolution = *r;
        } else {
            errors.push_back(
                {"time_resolution", "must be one of day, week, month, year", std::nullopt});
        }
    }
    if (auto it = candidate.find("adm_level"); it == candidate.end() || it->is_null()) {
        errors.push_back({"adm_level", "required field missing", std::nullopt});
    } else if (!it->is_number_integer()) {
        errors.push_back({"adm_level", "must be an integer 0..3", std::nullopt});
    } else if (auto level = adm_level_from_int(it->get<long>())) {
        m.adm_level = *level;
    } else {
        errors.push_back({"adm_level", "must be an integer 0..3", std::nullopt});
    }
    bool_field("temporal", m.temporal);
    bool_field("spatial", m.spatial);
    bool_field("categorical", m.categorical);
    bool_field("sprint", m.sprint);

    if (errors.empty()) out.value = std::move(m);
    return out;
}

nlohmann::json to_json(const ModelRecord& m) {
    return {
        {"id", m.id},
        {"name", m.name},
        {"description", m.description},
        {"repository", m.repository},
        {"implementation_language", m.implementation_language},
        {"disease", to_string(m.disease)},
        {"temporal", m.temporal},
        {"spatial", m.spatial},
        {"categorical", m.categorical},
        {"adm_level", to_int(m.adm_level)},
        {"time_resolution", to_string(m.time_resolution)},
        {"sprint", m.sprint},
        {"owner", m.owner},
    };
}

ModelRecord model_from_json(const nlohmann::json& j) {
    ModelRecord m;
    m.id = j.at("id").get<std::int64_t>();
    m.name = j.at("name").get<std::string>();
    m.description = j.at("description").get<std::string>();
    m.repository = j.at("repository").get<std::string>();
    m.implementation_language = j.at("implementation_language").get<std::string>();
    m.disease = parse_disease(j.at("disease").get<std::string>()).value();
    m.temporal = j.at("temporal").get<bool>();
    m.spatial = j.at("spatial").get<bool>();
    m.categorical = j.at("categorical").get<bool>();
    m.adm_level = adm_level_from_int(j.at("adm_level").get<long>()).value();
    m.time_resolution = parse_time_resolution(j.at("time_resolution").get<std::string>()).value();
    m.sprint = j.at("sprint").get<bool>();
    m.owner = j.at("owner").get<std::int64_t>();
    return m;
}

}  // namespace arbohub
