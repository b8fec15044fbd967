#include <iostream>

#include "CLI11.hpp"
#include "arbohub/client/commands.hpp"

using namespace arbohub;
using namespace arbohub::client;

namespace {

std::optional<CivilDate> date_option(const std::string& text, const char* name) {
    if (text.empty()) return std::nullopt;
    auto d = CivilDate::parse(text);
    if (!d) throw std::invalid_argument(std::string{name} + " must be a YYYY-mm-dd date");
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ArboHub command-line client"};
    app.require_subcommand(1);

    ConfigOverrides flags;
    std::string config_path;
    app.add_option("--api-url", flags.api_url, "server base URL (or ARBOHUB_API_URL)");
    app.add_option("--api-key", flags.api_key, "API key (or ARBOHUB_API_KEY)");
    app.add_option("--timeout", flags.timeout_seconds, "request timeout in seconds");
    app.add_option("--retries", flags.retries, "retries after a network failure");
    app.add_option("--config", config_path, "config file (default ~/.config/arbohub/config.json)");

    auto* fetch = app.add_subcommand("fetch", "download a dataset through every page");
    FetchOptions fetch_opts;
    std::string fetch_out;
    std::vector<std::string> fetch_filters;
    fetch->add_option("kind", fetch_opts.kind, "infodengue, climate, episcanner or ovitrap")->required();
    fetch->add_option("--out,-o", fetch_out, "output file; .json for JSON, else CSV");
    fetch->add_option("--per-page", fetch_opts.per_page, "page size")->check(CLI::PositiveNumber);
    for (const char* name : {"disease", "geocode", "uf", "start", "end"}) {
        fetch->add_option_function<std::string>(
            std::string{"--"} + name,
            [&fetch_opts, name](const std::string& v) { fetch_opts.filters.emplace_back(name, v); },
            std::string{name} + " filter");
    }

    auto* reg = app.add_subcommand("register-model", "register a model from a file or flags");
    std::string meta_file;
    nlohmann::json meta = nlohmann::json::object();
    reg->add_option("--file", meta_file, "JSON document with the model metadata");
    for (const char* name : {"name", "description", "repository", "disease", "time-resolution"}) {
        reg->add_option_function<std::string>(std::string{"--"} + name, [&meta, name](const std::string& v) {
            std::string key = name;
            std::replace(key.begin(), key.end(), '-', '_');
            meta[key] = v;
        });
    }
    reg->add_option_function<std::string>("--language", [&meta](const std::string& v) {
        meta["implementation_language"] = v;
    });
    reg->add_option_function<int>("--adm-level", [&meta](int v) { meta["adm_level"] = v; });
    for (const char* name : {"temporal", "spatial", "categorical", "sprint"}) {
        reg->add_option_function<bool>(std::string{"--"} + name, [&meta, name](bool v) { meta[name] = v; },
                                       "true or false");
    }

    auto* upload = app.add_subcommand("upload-prediction", "validate and upload prediction rows");
    UploadOptions up;
    upload->add_option("--model", up.model, "model id")->required();
    upload->add_option("--commit", up.commit, "40-character commit hash")->required();
    upload->add_option("--predict-date", up.predict_date, "YYYY-mm-dd")->required();
    upload->add_option("--data", up.data, "rows as .json array or .csv")->required();
    upload->add_option("--description", up.description, "free text");

    auto* score = app.add_subcommand("score", "score prediction rows against observed cases offline");
    ScoreOptions so;
    std::string metric = "all";
    int adm_level = -1;
    std::string disease;
    std::string column = "casos";
    std::string start;
    std::string end;
    score->add_option("--prediction", so.prediction, "rows file or prediction document")->required();
    score->add_option("--observed", so.observed, "infodengue-format CSV")->required();
    score->add_option("--metric", metric, "all, mae, mse, log_score or crps")
        ->check(CLI::IsMember({"all", "mae", "mse", "log_score", "crps"}));
    score->add_option("--adm-level", adm_level, "0..3; inferred from the rows when omitted")
        ->check(CLI::Range(0, 3));
    score->add_option("--disease", disease, "dengue, zika or chikungunya")
        ->check(CLI::IsMember({"dengue", "zika", "chikungunya"}));
    score->add_option("--observed-column", column, "casos or casos_est")
        ->check(CLI::IsMember({"casos", "casos_est"}));
    score->add_option("--start", start, "ignore rows dated before");
    score->add_option("--end", end, "ignore rows dated after");

    CLI11_PARSE(app, argc, argv);
    Io io{std::cout, std::cerr};

    return guarded(io, [&]() -> int {
        if (score->parsed()) {
            if (metric != "all") so.metric = scoring::parse_metric(metric);
            if (adm_level >= 0) so.adm_level = adm_level_from_int(adm_level);
            if (!disease.empty()) so.disease = parse_disease(disease);
            so.column = *datastore::parse_observed_column(column);
            so.window.start = date_option(start, "--start");
            so.window.end = date_option(end, "--end");
            return score_command(so, io);
        }

        ConfigOverrides file;
        if (auto path = config_file_path(config_path.empty() ? std::nullopt
                                                             : std::optional<std::filesystem::path>{config_path})) {
            file = read_config_file(*path);
        }
        const ApiClient client(resolve_config(flags, config_from_env(), file));

        if (fetch->parsed()) {
            if (!fetch_out.empty()) fetch_opts.out = fetch_out;
            return fetch_command(client, fetch_opts, io);
        }
        if (reg->parsed()) {
            if (!meta_file.empty()) {
                std::ifstream in(meta_file);
                if (!in) {
                    io.err << "cannot open " << meta_file << '\n';
                    return kExitValidation;
                }
                auto from_file = nlohmann::json::parse(in);
                if (!from_file.is_object()) {
                    io.err << meta_file << " must hold a JSON object\n";
                    return kExitValidation;
                }
                from_file.update(meta);  // flags win over the file
                meta = std::move(from_file);
            }
            return register_model_command(client, meta, io);
        }
        return upload_prediction_command(client, up, io);
    });
}
