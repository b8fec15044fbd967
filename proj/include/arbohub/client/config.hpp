#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

namespace arbohub::client {

struct ClientConfig {
    std::string api_url = "http://127.0.0.1:8000";
    std::optional<std::string> api_key;
    double timeout_seconds = 30.0;
    int retries = 2;
};

// Values given on the command line; unset fields fall through.
struct ConfigOverrides {
    std::optional<std::string> api_url;
    std::optional<std::string> api_key;
    std::optional<double> timeout_seconds;
    std::optional<int> retries;
};

// Config file: JSON object with optional "api_url", "api_key", "timeout",
// "retries". Throws std::invalid_argument on malformed content.
ConfigOverrides read_config_file(const std::filesystem::path& path);

// Explicit path, else $ARBOHUB_CONFIG, else ~/.config/arbohub/config.json
// when it exists.
std::optional<std::filesystem::path> config_file_path(
    const std::optional<std::filesystem::path>& explicit_path);

// Flags over ARBOHUB_API_URL / ARBOHUB_API_KEY over the file over defaults.
// Throws std::invalid_argument when the result is invalid.
ClientConfig resolve_config(const ConfigOverrides& flags, const ConfigOverrides& environment,
                            const ConfigOverrides& file);

ConfigOverrides config_from_env();

// Throws std::invalid_argument unless api_url is an absolute http(s) URL,
// timeout is positive and retries is not negative.
void check_config(const ClientConfig& config);

}  // namespace arbohub::client
