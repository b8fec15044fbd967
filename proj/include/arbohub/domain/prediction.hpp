#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arbohub/domain/civil_date.hpp"
#include "arbohub/domain/model.hpp"
#include "arbohub/domain/validation.hpp"
#include "json.hpp"

namespace arbohub {

// The eight columns of an uploaded prediction table, in wire order.
inline constexpr std::array<std::string_view, 8> kPredictionColumns{
    "date", "pred", "lower", "upper", "adm_0", "adm_1", "adm_2", "adm_3"};

struct PredictionRow {
    CivilDate date;
    double pred = 0.0;   // median
    double lower = 0.0;
    double upper = 0.0;
    std::optional<std::string> adm_0;   // ISO 3166-1 alpha-2
    std::optional<std::string> adm_1;   // UF, normalized
    std::optional<std::int64_t> adm_2;  // IBGE municipality geocode
    std::optional<std::int64_t> adm_3;

    // Text key of the geography at the given level, if the column is filled.
    std::optional<std::string> adm_key(AdmLevel level) const;

    friend bool operator==(const PredictionRow&, const PredictionRow&) = default;
};

struct PredictionRecord {
    std::int64_t id = 0;
    std::int64_t model = 0;
    std::string description;
    std::string commit;
    CivilDate predict_date;
    std::vector<PredictionRow> rows;

    friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct PredictionValidationOptions {
    std::size_t max_rows = 10000;
    // Report rows whose spacing disagrees with the model's time resolution.
    // Findings are warnings, never errors.
    bool strict_spacing = false;
};

bool is_commit_hash(std::string_view text);

// Full upload check against the registered model: row shape, interval
// ordering, the model's ADM column, and (date, adm) uniqueness.
Validated<PredictionRecord> validate_prediction(const nlohmann::json& candidate,
                                                const ModelRecord& model,
                                                const PredictionValidationOptions& options = {});

// Every rule that does not depend on the model's metadata. Used by clients
// before they know anything about the target model.
Validated<PredictionRecord> prevalidate_prediction(const nlohmann::json& candidate,
                                                   const PredictionValidationOptions& options = {});

nlohmann::json to_json(const PredictionRow& row);
// Includes the server-assigned id.
nlohmann::json to_json(const PredictionRecord& record);
// The upload document shape: model, description, commit, predict_date, prediction.
nlohmann::json to_submission_json(const PredictionRecord& record);

}  // namespace arbohub

namespace arbohub {

// Reads a record produced by to_json(PredictionRecord); throws
// std::invalid_argument if the document does not validate.
PredictionRecord prediction_from_json(const nlohmann::json& j);

}  // namespace arbohub
