#pragma once

#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "arbohub/client/api_client.hpp"
#include "arbohub/datastore/observations.hpp"
#include "arbohub/datastore/records.hpp"
#include "arbohub/domain/prediction.hpp"
#include "arbohub/scoring/score_report.hpp"

namespace arbohub::client {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,  // local validation, 400/422 responses, NoOverlap
    kExitNetwork = 2,
    kExitServer = 3,  // any other server rejection
};

int exit_code_for(const ServerError& error);

struct Io {
    std::ostream& out;
    std::ostream& err;
};

// One line per error: row, field, reason in aligned columns.
void render_field_errors(std::ostream& out, const ValidationErrors& errors);
void report_server_error(std::ostream& err, const ServerError& error);

// Runs a command, reporting client, server and network exceptions on io.err
// and mapping them to exit codes.
int guarded(Io io, const std::function<int()>& command);

// --- fetch ---------------------------------------------------------------

struct FetchResult {
    std::vector<nlohmann::json> items;
    std::int64_t pages = 0;
};

// Reads page 1, then the remaining pages with up to `max_in_flight` requests
// outstanding. Items come back in page order.
FetchResult fetch_all(const ApiClient& client, datastore::DatasetKind kind, QueryPairs filters,
                      std::int64_t per_page = 100, int max_in_flight = 4);

enum class OutputFormat { csv, json };

// ".json" selects JSON; anything else CSV.
OutputFormat format_for(const std::filesystem::path& path);

void write_items(std::ostream& out, datastore::DatasetKind kind,
                 const std::vector<nlohmann::json>& items, OutputFormat format);

struct FetchOptions {
    std::string kind;
    QueryPairs filters;
    std::optional<std::filesystem::path> out;  // stdout when unset
    std::int64_t per_page = 100;
};

int fetch_command(const ApiClient& client, const FetchOptions& options, Io io);

// --- registry ------------------------------------------------------------

int register_model_command(const ApiClient& client, const nlohmann::json& meta, Io io);

// Prediction rows from a JSON array of row objects or a CSV whose header uses
// the row column names. CSV cells are typed: numbers where they parse, empty
// cells omitted. Throws std::invalid_argument on unreadable files.
nlohmann::json rows_from_csv(std::istream& in);
nlohmann::json load_rows(const std::filesystem::path& path);

struct UploadOptions {
    std::int64_t model = 0;
    std::string commit;
    std::string predict_date;
    std::string description;
    std::filesystem::path data;
};

nlohmann::json submission_document(const UploadOptions& options, nlohmann::json rows);

// Validates locally (sending nothing on failure), fetches the model, checks
// the rows against it, then uploads.
int upload_prediction_command(const ApiClient& client, const UploadOptions& options, Io io);

// --- offline scoring -----------------------------------------------------

struct ScoreOptions {
    std::filesystem::path prediction;  // rows file or prediction document
    std::filesystem::path observed;    // infodengue-format CSV
    std::optional<scoring::Metric> metric;
    std::optional<AdmLevel> adm_level;  // inferred from the rows when unset
    std::optional<Disease> disease;
    datastore::ObservedColumn column = datastore::ObservedColumn::casos;
    datastore::ScoreWindow window;
};

// Deepest level whose ADM column is set on every row.
std::optional<AdmLevel> infer_adm_level(const PredictionRecord& prediction);

// Loads a prediction for scoring: a document with "prediction" rows (and
// optionally "id"), a bare JSON row array, or a rows CSV. Rows are checked
// with the model-independent upload rules.
Validated<PredictionRecord> load_prediction_for_scoring(const std::filesystem::path& path);

int score_command(const ScoreOptions& options, Io io);

}  // namespace arbohub::client
