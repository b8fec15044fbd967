#include "arbohub/client/config.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>

namespace arbohub::client {

ConfigOverrides read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config file " + path.string() + " is not JSON: " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    ConfigOverrides out;
    auto field = [&](const char* name) -> const nlohmann::json* {
        auto it = j.find(name);
        return it == j.end() || it->is_null() ? nullptr : &*it;
    };
    try {
        if (auto v = field("api_url")) out.api_url = v->get<std::string>();
        if (auto v = field("api_key")) out.api_key = v->get<std::string>();
        if (auto v = field("timeout")) out.timeout_seconds = v->get<double>();
        if (auto v = field("retries")) out.retries = v->get<int>();
    } catch (const nlohmann::json::type_error& e) {
        throw std::invalid_argument("config file " + path.string() + ": " + e.what());
    }
    return out;
}

std::optional<std::filesystem::path> config_file_path(
    const std::optional<std::filesystem::path>& explicit_path) {
    if (explicit_path) return explicit_path;
    if (const char* v = std::getenv("ARBOHUB_CONFIG"); v && *v) return std::filesystem::path{v};
    if (const char* home = std::getenv("HOME"); home && *home) {
        auto p = std::filesystem::path{home} / ".config" / "arbohub" / "config.json";
        if (std::filesystem::exists(p)) return p;
    }
    return std::nullopt;
}

ConfigOverrides config_from_env() {
    ConfigOverrides out;
    if (const char* v = std::getenv("ARBOHUB_API_URL"); v && *v) out.api_url = v;
    if (const char* v = std::getenv("ARBOHUB_API_KEY"); v && *v) out.api_key = v;
    return out;
}

void check_config(const ClientConfig& config) {
    static const std::regex absolute(R"(^https?://[^/\s:]+(:\d+)?(/\S*)?$)", std::regex::icase);
    if (!std::regex_match(config.api_url, absolute)) {
        throw std::invalid_argument("api_url must be an absolute http(s) URL, got '" +
                                    config.api_url + "'");
    }
    if (!(config.timeout_seconds > 0)) throw std::invalid_argument("timeout must be positive");
    if (config.retries < 0) throw std::invalid_argument("retries must not be negative");
}

ClientConfig resolve_config(const ConfigOverrides& flags, const ConfigOverrides& environment,
                            const ConfigOverrides& file) {
    ClientConfig out;
    for (const auto* layer : {&file, &environment, &flags}) {
        if (layer->api_url) out.api_url = *layer->api_url;
        if (layer->api_key) out.api_key = *layer->api_key;
        if (layer->timeout_seconds) out.timeout_seconds = *layer->timeout_seconds;
        if (layer->retries) out.retries = *layer->retries;
    }
    check_config(out);
    return out;
}

}  // namespace arbohub::client
