#include "arbohub/client/commands.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <future>
#include <iomanip>
#include <set>

#include "arbohub/datastore/csv.hpp"
#include "arbohub/datastore/ingest.hpp"
#include "arbohub/scoring/gaussian.hpp"

namespace arbohub::client {

using nlohmann::json;

int exit_code_for(const ServerError& error) {
    switch (error.status()) {
        case 400:
        case 422: return kExitValidation;
        case 409: return error.error().code == "no_overlap" ? kExitValidation : kExitServer;
        default: return kExitServer;
    }
}

void render_field_errors(std::ostream& out, const ValidationErrors& errors) {
    std::size_t row_w = 3;
    std::size_t field_w = 5;
    for (const auto& e : errors) {
        if (e.row) row_w = std::max(row_w, std::to_string(*e.row).size());
        field_w = std::max(field_w, e.field.size());
    }
    out << std::left << std::setw(static_cast<int>(row_w)) << "row" << "  "
        << std::setw(static_cast<int>(field_w)) << "field" << "  reason\n";
    for (const auto& e : errors) {
        out << std::setw(static_cast<int>(row_w)) << (e.row ? std::to_string(*e.row) : "-") << "  "
            << std::setw(static_cast<int>(field_w)) << e.field << "  " << e.reason << '\n';
    }
    out << std::right;
}

void report_server_error(std::ostream& err, const ServerError& error) {
    const auto& e = error.error();
    err << "server rejected the request: " << e.status << ' ' << e.code;
    if (!e.message.empty()) err << ": " << e.message;
    err << '\n';
    if (e.status == 401) {
        err << "check the API key given by --api-key, ARBOHUB_API_KEY or the config file\n";
    }
    if (!e.details.empty()) render_field_errors(err, e.details);
}

// --- fetch ---------------------------------------------------------------

FetchResult fetch_all(const ApiClient& client, datastore::DatasetKind kind, QueryPairs filters,
                      std::int64_t per_page, int max_in_flight) {
    const std::string path = "/api/datastore/" + std::string{datastore::to_string(kind)};
    auto page_query = [&](std::int64_t page) {
        auto q = filters;
        q.emplace_back("page", std::to_string(page));
        q.emplace_back("per_page", std::to_string(per_page));
        return q;
    };
    FetchResult out;
    const auto first = client.get(path, page_query(1));
    out.pages = first.at("pagination").at("total_pages").get<std::int64_t>();
    for (const auto& item : first.at("items")) out.items.push_back(item);

    std::deque<std::future<json>> in_flight;
    std::int64_t next = 2;
    auto launch = [&] {
        in_flight.push_back(std::async(std::launch::async, [&client, &path, q = page_query(next)] {
            return client.get(path, q);
        }));
        ++next;
    };
    while (next <= out.pages || !in_flight.empty()) {
        while (next <= out.pages && static_cast<int>(in_flight.size()) < max_in_flight) launch();
        auto page = in_flight.front().get();
        in_flight.pop_front();
        for (const auto& item : page.at("items")) out.items.push_back(item);
    }
    return out;
}

OutputFormat format_for(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".json" ? OutputFormat::json : OutputFormat::csv;
}

void write_items(std::ostream& out, datastore::DatasetKind kind, const std::vector<json>& items,
                 OutputFormat format) {
    if (format == OutputFormat::json) {
        out << json(items).dump(2) << '\n';
        return;
    }
    datastore::write_csv_record(out, datastore::csv_header(kind));
    for (const auto& item : items) datastore::write_csv_record(out, datastore::csv_fields(kind, item));
}

int fetch_command(const ApiClient& client, const FetchOptions& options, Io io) {
    const auto kind = datastore::parse_dataset_kind(options.kind);
    if (!kind) {
        io.err << "unknown dataset '" << options.kind
               << "'; expected infodengue, climate, episcanner or ovitrap\n";
        return kExitValidation;
    }
    const auto result = fetch_all(client, *kind, options.filters, options.per_page);
    const json summary{{"dataset", options.kind},
                       {"rows", result.items.size()},
                       {"pages", result.pages},
                       {"out", options.out ? options.out->string() : "-"}};
    if (options.out) {
        std::ofstream file(*options.out, std::ios::binary);
        if (!file) {
            io.err << "cannot write " << options.out->string() << '\n';
            return kExitValidation;
        }
        write_items(file, *kind, result.items, format_for(*options.out));
        io.out << summary.dump() << '\n';
    } else {
        write_items(io.out, *kind, result.items, OutputFormat::csv);
        io.err << summary.dump() << '\n';
    }
    return kExitOk;
}

// --- registry ------------------------------------------------------------

int guarded(Io io, const std::function<int()>& command) {
    try {
        return command();
    } catch (const ServerError& e) {
        report_server_error(io.err, e);
        return exit_code_for(e);
    } catch (const NetworkError& e) {
        io.err << e.what() << '\n';
        return kExitNetwork;
    } catch (const nlohmann::json::exception& e) {
        io.err << "invalid JSON: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        io.err << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitServer;
    }
}

int register_model_command(const ApiClient& client, const json& meta, Io io) {
    if (!client.config().api_key) {
        io.err << "no API key: pass --api-key, set ARBOHUB_API_KEY or add api_key to the config "
                  "file\n";
        return kExitValidation;
    }
    const auto created = client.post("/api/registry/models", meta);
    io.out << created.at("id").get<std::int64_t>() << '\n';
    return kExitOk;
}

namespace {

json typed_cell(const std::string& column, const std::string& cell) {
    if (column == "date" || column == "adm_0") return cell;
    if (column == "adm_1" || column == "adm_2" || column == "adm_3") {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec == std::errc{} && ptr == cell.data() + cell.size()) return v;
        return cell;
    }
    double v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec == std::errc{} && ptr == cell.data() + cell.size()) return v;
    return cell;
}

}  // namespace

json rows_from_csv(std::istream& in) {
    datastore::CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw std::invalid_argument("rows CSV is empty");
    json rows = json::array();
    std::vector<std::string> cells;
    while (reader.next(cells)) {
        if (cells.size() != header.size()) {
            throw std::invalid_argument("line " + std::to_string(reader.line()) + ": expected " +
                                        std::to_string(header.size()) + " fields, found " +
                                        std::to_string(cells.size()));
        }
        json row = json::object();
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (!cells[i].empty()) row[header[i]] = typed_cell(header[i], cells[i]);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path.string() + " is not valid JSON: " + e.what());
    }
}

}  // namespace

json load_rows(const std::filesystem::path& path) {
    if (format_for(path) == OutputFormat::json) {
        auto j = read_json_file(path);
        if (!j.is_array()) throw std::invalid_argument(path.string() + " must hold a JSON array of rows");
        return j;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    try {
        return rows_from_csv(in);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

json submission_document(const UploadOptions& options, json rows) {
    return {{"model", options.model},
            {"description", options.description},
            {"commit", options.commit},
            {"predict_date", options.predict_date},
            {"prediction", std::move(rows)}};
}

int upload_prediction_command(const ApiClient& client, const UploadOptions& options, Io io) {
    json rows;
    try {
        rows = load_rows(options.data);
    } catch (const std::invalid_argument& e) {
        io.err << e.what() << '\n';
        return kExitValidation;
    }
    const auto document = submission_document(options, std::move(rows));
    const auto pre = prevalidate_prediction(document);
    if (!pre.ok()) {
        io.err << "prediction failed validation; nothing was sent\n";
        render_field_errors(io.err, pre.errors);
        return kExitValidation;
    }
    if (!client.config().api_key) {
        io.err << "no API key: pass --api-key, set ARBOHUB_API_KEY or add api_key to the config "
                  "file\n";
        return kExitValidation;
    }
    const auto model = model_from_json(
        client.get("/api/registry/models/" + std::to_string(options.model)));
    const auto full = validate_prediction(document, model);
    if (!full.ok()) {
        io.err << "prediction does not fit model " << model.id << "; nothing was uploaded\n";
        render_field_errors(io.err, full.errors);
        return kExitValidation;
    }
    const auto created = client.post("/api/registry/predictions", document);
    io.out << created.at("id").get<std::int64_t>() << '\n';
    return kExitOk;
}

// --- offline scoring -----------------------------------------------------

std::optional<AdmLevel> infer_adm_level(const PredictionRecord& prediction) {
    if (prediction.rows.empty()) return std::nullopt;
    for (int level = 3; level >= 0; --level) {
        const auto l = static_cast<AdmLevel>(level);
        const bool all = std::all_of(prediction.rows.begin(), prediction.rows.end(),
                                     [&](const PredictionRow& r) { return r.adm_key(l).has_value(); });
        if (all) return l;
    }
    return std::nullopt;
}

Validated<PredictionRecord> load_prediction_for_scoring(const std::filesystem::path& path) {
    json rows;
    std::int64_t id = 0;
    std::int64_t model = 1;
    if (format_for(path) == OutputFormat::json) {
        auto j = read_json_file(path);
        if (j.is_object()) {
            id = j.value("id", std::int64_t{0});
            model = j.value("model", std::int64_t{1});
            rows = j.value("prediction", json::array());
        } else {
            rows = std::move(j);
        }
    } else {
        rows = load_rows(path);
    }
    // Only the rows matter for scoring; the other document fields are
    // placeholders that satisfy the shape rules.
    const json document{{"model", model},
                        {"description", ""},
                        {"commit", std::string(40, '0')},
                        {"predict_date", "1970-01-01"},
                        {"prediction", std::move(rows)}};
    auto checked = prevalidate_prediction(document);
    if (checked.ok()) checked.value->id = id;
    return checked;
}

int score_command(const ScoreOptions& options, Io io) {
    Validated<PredictionRecord> prediction;
    try {
        prediction = load_prediction_for_scoring(options.prediction);
    } catch (const std::invalid_argument& e) {
        io.err << e.what() << '\n';
        return kExitValidation;
    }
    if (!prediction.ok()) {
        io.err << "prediction rows failed validation\n";
        render_field_errors(io.err, prediction.errors);
        return kExitValidation;
    }
    const auto level = options.adm_level ? options.adm_level : infer_adm_level(*prediction.value);
    if (!level) {
        io.err << "cannot infer the adm level: no adm column is set on every row; pass "
                  "--adm-level\n";
        return kExitValidation;
    }

    std::ifstream in(options.observed, std::ios::binary);
    if (!in) {
        io.err << "cannot open " << options.observed.string() << '\n';
        return kExitValidation;
    }
    datastore::ParsedDataset observed;
    try {
        observed = datastore::parse_dataset_csv(datastore::DatasetKind::infodengue, in,
                                                {.disease = options.disease});
    } catch (const datastore::IngestError& e) {
        io.err << options.observed.string() << ": " << e.what() << '\n';
        return kExitValidation;
    }
    for (const auto& r : observed.rejections) {
        io.err << options.observed.string() << ':' << r.line << ": skipped: " << r.reason << '\n';
    }
    std::vector<datastore::CaseWeekRecord> cases;
    std::set<Disease> diseases;
    for (auto& record : observed.records) {
        auto c = std::get<datastore::CaseWeekRecord>(std::move(record));
        if (options.disease && c.disease != *options.disease) continue;
        diseases.insert(c.disease);
        cases.push_back(std::move(c));
    }
    if (diseases.size() > 1) {
        io.err << "observed file mixes diseases; pass --disease\n";
        return kExitValidation;
    }

    try {
        const auto report = datastore::score_with_cases(*prediction.value, *level, cases,
                                                        options.window, options.column);
        io.out << scoring::to_json(report, options.metric).dump() << '\n';
        return kExitOk;
    } catch (const scoring::ScoringError& e) {
        io.err << to_string(e.code()) << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (const datastore::UnknownAdmKey& e) {
        io.err << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace arbohub::client
