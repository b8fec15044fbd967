#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arbohub/domain/validation.hpp"
#include "json.hpp"

namespace arbohub {

enum class Disease { dengue, zika, chikungunya };
enum class TimeResolution { day, week, month, year };

// Smallest spatial unit of a model's output.
enum class AdmLevel : int { national = 0, state = 1, municipality = 2, submunicipality = 3 };

std::string_view to_string(Disease d);
std::string_view to_string(TimeResolution r);
std::optional<Disease> parse_disease(std::string_view text);
std::optional<TimeResolution> parse_time_resolution(std::string_view text);
std::optional<AdmLevel> adm_level_from_int(long level);
inline int to_int(AdmLevel level) { return static_cast<int>(level); }

// Column carrying the geography for a level: "adm_0".."adm_3".
std::string adm_column(AdmLevel level);

inline constexpr std::array<std::string_view, 13> kImplementationLanguages{
    "Python", "R", "Julia", "C", "C++", "C#", "Rust", "Go", "Java", "JavaScript", "Kotlin", "Zig",
    "other"};

struct ModelRecord {
    std::int64_t id = 0;
    std::string name;
    std::string description;
    std::string repository;
    std::string implementation_language;
    Disease disease = Disease::dengue;
    bool temporal = false;
    bool spatial = false;
    bool categorical = false;
    AdmLevel adm_level = AdmLevel::national;
    TimeResolution time_resolution = TimeResolution::week;
    bool sprint = false;
    std::int64_t owner = 0;

    friend bool operator==(const ModelRecord&, const ModelRecord&) = default;
};

struct ModelValidationOptions {
    std::vector<std::string> allowed_repository_hosts{"github.com", "gitlab.com"};
};

inline constexpr std::size_t kMaxModelNameLength = 100;

// Checks every field of a registration document and reports every failure.
// Server-assigned fields (id, owner) are not accepted from the candidate.
Validated<ModelRecord> validate_model_meta(const nlohmann::json& candidate,
                                           const ModelValidationOptions& options = {});

nlohmann::json to_json(const ModelRecord& model);
// Inverse of to_json for records read back from storage; throws on shape errors.
ModelRecord model_from_json(const nlohmann::json& j);

}  // namespace arbohub
