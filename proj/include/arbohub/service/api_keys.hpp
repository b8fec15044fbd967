#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace arbohub::service {

// Tokens look like "ahk_" + 16 hex key id + 48 hex secret. The key id is
// stored in clear for lookup; the secret only as a salted SHA-256 digest.
struct ApiKey {
    std::string token;
    std::string key_id;
    std::string salt_hex;
    std::string hash_hex;
};

ApiKey generate_api_key();

struct TokenParts {
    std::string key_id;
    std::string secret;
};

std::optional<TokenParts> split_token(std::string_view token);

std::string hash_secret(std::string_view secret, std::string_view salt_hex);

// Constant-time comparison of the secret's digest against the stored one.
bool verify_secret(std::string_view secret, std::string_view salt_hex, std::string_view hash_hex);

}  // namespace arbohub::service
