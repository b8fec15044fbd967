#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace arbohub {

struct FieldError {
    std::string field;
    std::string reason;
    std::optional<std::size_t> row;  // set for errors inside prediction rows

    friend bool operator==(const FieldError&, const FieldError&) = default;
};

using ValidationErrors = std::vector<FieldError>;

// Either a fully typed value or the complete list of what was wrong with the
// candidate. Never both.
template <class T>
struct Validated {
    std::optional<T> value;
    ValidationErrors errors;
    ValidationErrors warnings;

    bool ok() const { return value.has_value(); }
};

nlohmann::json to_json(const FieldError& error);
nlohmann::json to_json(const ValidationErrors& errors);

}  // namespace arbohub

namespace arbohub {

// Thrown by operations that validate their inputs and have no other result
// channel; carries every failing field.
class ValidationFailure : public std::runtime_error {
public:
    explicit ValidationFailure(ValidationErrors errors)
        : std::runtime_error(summarize(errors)), errors_(std::move(errors)) {}
    const ValidationErrors& errors() const noexcept { return errors_; }

private:
    static std::string summarize(const ValidationErrors& errors) {
        std::string out = "validation failed";
        for (const auto& e : errors) out += "; " + e.field + ": " + e.reason;
        return out;
    }
    ValidationErrors errors_;
};

}  // namespace arbohub
