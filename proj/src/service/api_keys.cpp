#include "arbohub/service/api_keys.hpp"

#include <sodium.h>

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <vector>

namespace arbohub::service {

namespace {

constexpr std::string_view kPrefix = "ahk_";
constexpr std::size_t kKeyIdBytes = 8;
constexpr std::size_t kSecretBytes = 24;
constexpr std::size_t kSaltBytes = 16;

void ensure_sodium() {
    static const int status = sodium_init();
    if (status < 0) throw std::runtime_error("libsodium initialisation failed");
}

std::string random_hex(std::size_t bytes) {
    std::vector<unsigned char> buf(bytes);
    randombytes_buf(buf.data(), buf.size());
    std::string hex(bytes * 2 + 1, '\0');
    sodium_bin2hex(hex.data(), hex.size(), buf.data(), buf.size());
    hex.pop_back();
    return hex;
}

bool is_lower_hex(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

}  // namespace

ApiKey generate_api_key() {
    ensure_sodium();
    ApiKey key;
    key.key_id = random_hex(kKeyIdBytes);
    const auto secret = random_hex(kSecretBytes);
    key.token = std::string{kPrefix} + key.key_id + secret;
    key.salt_hex = random_hex(kSaltBytes);
    key.hash_hex = hash_secret(secret, key.salt_hex);
    return key;
}

std::optional<TokenParts> split_token(std::string_view token) {
    const std::size_t id_len = kKeyIdBytes * 2;
    const std::size_t secret_len = kSecretBytes * 2;
    if (token.size() != kPrefix.size() + id_len + secret_len || !token.starts_with(kPrefix)) {
        return std::nullopt;
    }
    token.remove_prefix(kPrefix.size());
    if (!is_lower_hex(token)) return std::nullopt;
    return TokenParts{std::string{token.substr(0, id_len)}, std::string{token.substr(id_len)}};
}

std::string hash_secret(std::string_view secret, std::string_view salt_hex) {
    ensure_sodium();
    unsigned char digest[crypto_hash_sha256_BYTES];
    crypto_hash_sha256_state state;
    crypto_hash_sha256_init(&state);
    crypto_hash_sha256_update(&state, reinterpret_cast<const unsigned char*>(salt_hex.data()),
                              salt_hex.size());
    crypto_hash_sha256_update(&state, reinterpret_cast<const unsigned char*>(secret.data()),
                              secret.size());
    crypto_hash_sha256_final(&state, digest);
    std::string hex(sizeof digest * 2 + 1, '\0');
    sodium_bin2hex(hex.data(), hex.size(), digest, sizeof digest);
    hex.pop_back();
    return hex;
}

bool verify_secret(std::string_view secret, std::string_view salt_hex, std::string_view hash_hex) {
    const auto actual = hash_secret(secret, salt_hex);
    return actual.size() == hash_hex.size() &&
           sodium_memcmp(actual.data(), hash_hex.data(), actual.size()) == 0;
}

}  // namespace arbohub::service
