#pragma once

#include <cstdint>
#include <string>

namespace arbohub {

// A contributor allowed to register models and upload predictions. Keys are
// issued locally; only a salted hash of each key is ever stored.
struct Account {
    std::int64_t id = 0;
    std::string name;
    std::string created_at;  // UTC, ISO 8601
    bool active = true;
};

}  // namespace arbohub
