// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "arbohub/client/commands.hpp"
#include "arbohub/scoring/gaussian.hpp"
#include "integration/server_fixture.hpp"
#include "oracles.hpp"

using namespace arbohub;
using namespace arbohub::testing;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Collects failed expectations for one criterion.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ = failed_ || !ok;
    }
    Outcome done(std::string detail) const {
        if (!failed_) return {true, std::move(detail)};
        std::string out;
        for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + f;
        return {false, out};
    }

private:
    bool failed_ = false;
    std::vector<std::string> failures_;
};

std::string fmt(const char* pattern, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, value);
    return buf;
}

struct Reply {
    int status = 0;
    json body;
};

Reply call(const LiveServer& server, const std::string& method, const std::string& path,
           const std::optional<std::string>& key = std::nullopt, const json& body = nullptr) {
    auto http = server.http();
    httplib::Headers headers;
    if (key) headers.emplace("X-API-Key", *key);
    auto res = method == "POST" ? http.Post(path, headers, body.dump(), "application/json")
                                : http.Get(path, headers);
    if (!res) throw std::runtime_error(method + " " + path + ": " + httplib::to_string(res.error()));
    return {res->status, res->body.empty() ? json() : json::parse(res->body)};
}

bool has_detail(const json& body, const std::string& field, std::optional<std::size_t> row = {}) {
    if (!body.contains("details")) return false;
    for (const auto& d : body["details"]) {
        if (d.value("field", "") != field) continue;
        if (!row) return true;
        if (d.contains("row") && d["row"] == *row) return true;
    }
    return false;
}

Outcome crps_oracle_equivalence() {
    Checks c;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int points = 0;
    for (int mu = -5; mu <= 5; ++mu) {
        for (double sigma : {0.1, 1.0, 10.0}) {
            for (int k = -20; k <= 20; ++k) {
                const double y = 0.5 * k;
                const double delta =
                    std::abs(scoring::crps_normal(mu, sigma, y) - crps_by_integration(mu, sigma, y));
                worst = std::max(worst, delta);
                ++points;
                c.expect(delta < 1e-6, "mu=" + std::to_string(mu) + " sigma=" + std::to_string(sigma) +
                                           " y=" + std::to_string(y) + fmt(" |d|=%.3g", delta));
            }
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(points == 11 * 3 * 41, "grid size " + std::to_string(points));
    c.expect(seconds < 5.0, fmt("took %.2f s", seconds));
    return c.done(std::to_string(points) + " points" + fmt(", max |d| %.2e", worst) +
                  fmt(", %.2f s", seconds));
}

Outcome analytic_spot_values() {
    Checks c;
    const double crps0 = scoring::crps_normal(0, 1, 0);
    const double crps1 = scoring::crps_normal(0, 1, 1);
    const double log0 = scoring::log_score_normal(0, 1, 0);
    c.expect(std::abs(crps0 - 0.2336949) < 1e-6, fmt("crps(0,1,0)=%.10f", crps0));
    c.expect(std::abs(crps1 - 0.6024413) < 1e-6, fmt("crps(0,1,1)=%.10f", crps1));
    // The 7-digit literal -0.9189385 is -log(2 pi)/2 rounded; the 1e-9 bound
    // is applied to the exact constant and the literal to its printed digits.
    const double exact = -0.5 * std::log(2.0 * std::numbers::pi);
    c.expect(std::abs(log0 - exact) < 1e-9, fmt("log_score(0,1,0)=%.12f", log0));
    c.expect(std::abs(log0 - (-0.9189385)) < 5e-8, fmt("log_score(0,1,0)=%.12f", log0));
    c.expect(scoring::sigma_from_interval(2, 10) == 2.0, "sigma_from_interval(2,10) != 2");
    return c.done(fmt("crps(0,1,0)=%.7f", crps0) + fmt(" crps(0,1,1)=%.7f", crps1) +
                  fmt(" log_score(0,1,0)=%.10f", log0) + " sigma(2,10)=2");
}

Outcome crps_properties() {
    Checks c;
    std::mt19937_64 rng(20240915);
    std::uniform_real_distribution<double> loc(-100, 100), scale_log(-3, 3), shift(-100, 100),
        factor(0.1, 10), gap_log(std::log(0.1), std::log(100.0));
    for (int i = 0; i < 1000; ++i) {
        const double mu = loc(rng), y = loc(rng), sigma = std::exp(scale_log(rng));
        const double base = scoring::crps_normal(mu, sigma, y);
        c.expect(base >= 0.0, fmt("negative crps %.3g", base));
        const double s = shift(rng);
        const double moved = scoring::crps_normal(mu + s, sigma, y + s);
        c.expect(std::abs(moved - base) <= 1e-12 * std::max(1.0, base), fmt("translation |d|=%.3g", moved - base));
        const double k = factor(rng);
        const double scaled = scoring::crps_normal(k * mu, k * sigma, k * y);
        c.expect(std::abs(scaled - k * base) <= 1e-12 * std::max(1.0, k * base),
                 fmt("scale |d|=%.3g", scaled - k * base));
        const double gap = std::exp(gap_log(rng)) * (i % 2 ? 1 : -1);
        const double point = scoring::crps_normal(mu, 1e-9, mu + gap);
        c.expect(std::abs(point - std::abs(gap)) < 1e-6, fmt("point limit |d|=%.3g", point - std::abs(gap)));
    }
    return c.done("1000 randomized cases: nonnegative, translation and scale equivariant, point limit");
}

Outcome validation_protocol() {
    Checks c;
    LiveServer server;
    const auto key = server.issue_key("acceptance");
    const auto model = call(server, "POST", "/api/registry/models", key, model_meta(1));
    c.expect(model.status == 201, "model registration " + std::to_string(model.status));
    const auto id = model.body.value("id", std::int64_t{0});

    auto ok = call(server, "POST", "/api/registry/predictions", key, submission(id, mg_rows()));
    c.expect(ok.status == 201, "rows with adm_1 got " + std::to_string(ok.status));

    auto rows = mg_rows();
    for (auto& row : rows) row.erase("adm_1");
    auto missing = call(server, "POST", "/api/registry/predictions", key, submission(id, rows));
    c.expect(missing.status == 422, "rows without adm_1 got " + std::to_string(missing.status));
    c.expect(has_detail(missing.body, "adm_1"), "422 does not name adm_1");

    rows = mg_rows();
    rows[4]["lower"] = rows[4]["pred"].get<double>() + 1.0;
    rows[11]["upper"] = rows[11]["pred"].get<double>() - 1.0;
    auto disordered = call(server, "POST", "/api/registry/predictions", key, submission(id, rows));
    c.expect(disordered.status == 422, "disordered interval got " + std::to_string(disordered.status));
    c.expect(has_detail(disordered.body, "pred", 4), "row 4 lower>pred not reported");
    c.expect(has_detail(disordered.body, "pred", 11), "row 11 pred>upper not reported");
    return c.done("adm_1 rows 201; missing adm_1 422 naming adm_1; lower>pred row 4 and pred>upper row 11 reported");
}

Outcome pagination_invariant() {
    Checks c;
    LiveServer server;
    std::vector<datastore::CaseWeekRecord> rows;
    for (auto week : weeks_from(EpiWeek{2023, 1}, 50)) {
        for (std::int64_t code : {3106200, 3118601, 3136702, 3170206, 3143302}) {
            rows.push_back(case_week(code, week, week.week));
        }
    }
    server.ingest(datastore::DatasetKind::infodengue, to_csv(datastore::DatasetKind::infodengue, rows));
    std::vector<std::size_t> sizes;
    std::vector<json> all;
    for (int page = 1; page <= 3; ++page) {
        auto r = call(server, "GET", "/api/datastore/infodengue?per_page=100&page=" + std::to_string(page));
        c.expect(r.status == 200, "page status " + std::to_string(r.status));
        std::set<std::string> keys;
        for (const auto& [k, _] : r.body.items()) keys.insert(k);
        c.expect(keys == std::set<std::string>{"items", "pagination"}, "envelope keys " + r.body.dump().substr(0, 80));
        c.expect(r.body["pagination"]["total_pages"] == 3, "total_pages");
        c.expect(r.body["pagination"]["total_items"] == 250, "total_items");
        sizes.push_back(r.body["items"].size());
        for (const auto& item : r.body["items"]) all.push_back(item);
    }
    c.expect(sizes == std::vector<std::size_t>{100, 100, 50}, "page sizes");
    std::set<std::string> unique;
    for (const auto& item : all) unique.insert(item.dump());
    c.expect(unique.size() == 250, "duplicates across pages");
    std::set<std::string> expected;
    for (const auto& r : rows) expected.insert(datastore::record_to_json(r).dump());
    c.expect(unique == expected, "concatenation differs from ingested rows");
    return c.done("pages 100/100/50, total_pages 3, lossless, no duplicates, keys items+pagination");
}

Outcome end_to_end() {
    Checks c;
    LiveServer server;
    const auto key = server.issue_key("acceptance");
    auto model = call(server, "POST", "/api/registry/models", key, model_meta(1));
    c.expect(model.status == 201, "model " + std::to_string(model.status));
    auto rows = mg_rows(0.0, 2.0);
    c.expect(rows.size() == 52, "row count");
    auto pred = call(server, "POST", "/api/registry/predictions", key,
                     submission(model.body.value("id", std::int64_t{0}), rows));
    c.expect(pred.status == 201, "prediction " + std::to_string(pred.status));
    auto report = server.ingest(datastore::DatasetKind::infodengue,
                                to_csv(datastore::DatasetKind::infodengue, mg_cases()));
    c.expect(report.rejected == 0 && report.inserted == 104, "ingest");
    auto score = call(server, "GET", "/api/registry/predictions/" +
                                         std::to_string(pred.body.value("id", std::int64_t{0})) + "/score");
    c.expect(score.status == 200, "score " + std::to_string(score.status));
    const auto& s = score.body["scores"];
    c.expect(s.size() == 4, "metrics " + s.dump());
    c.expect(s.value("mae", -1.0) == 0.0, "mae " + s.dump());
    c.expect(s.value("mse", -1.0) == 0.0, "mse " + s.dump());
    c.expect(std::abs(s.value("crps", 0.0) - 0.2336949) < 1e-6, "crps " + s.dump());
    c.expect(std::abs(s.value("log_score", 0.0) - (-0.9189385)) < 1e-6, "log_score " + s.dump());
    return c.done("scores " + s.dump());
}

Outcome epiweek_oracle() {
    Checks c;
    const auto oracle = epiweeks_by_enumeration(2010, 2030);
    int dates = 0;
    for (auto day = CivilDate::from_ymd(2010, 1, 1); day <= CivilDate::from_ymd(2030, 12, 31);
         day = day.plus_days(1)) {
        ++dates;
        const auto expected = oracle.at(static_cast<long>(day.days().time_since_epoch().count()));
        const auto got = epiweek_from_date(day);
        c.expect(got.year == expected.year && got.week == expected.week, day.to_string());
    }
    c.expect(dates == 7670, "date count " + std::to_string(dates));
    const auto boundary = epiweek_from_date(CivilDate::from_ymd(2022, 1, 1));
    c.expect(boundary == (EpiWeek{2021, 52}), "2022-01-01 boundary");
    return c.done(std::to_string(dates) + " dates, 2022-01-01 -> 2021W52");
}

template <class T>
bool round_trips(datastore::DatasetStore& store, datastore::DatasetKind kind, const std::vector<T>& rows) {
    std::istringstream in(to_csv(kind, rows));
    const auto report = datastore::ingest_dataset(store, kind, in);
    if (report.rejected != 0) return false;
    auto stored = records_as<T>(store.select(kind, {}));
    if (stored.size() != rows.size()) return false;
    for (const auto& r : rows) {
        if (std::find(stored.begin(), stored.end(), r) == stored.end()) return false;
    }
    return true;
}

Outcome ingestion() {
    Checks c;
    TempDir dir;
    auto store = open_store(dir);
    std::vector<datastore::CaseWeekRecord> cases;
    for (auto week : weeks_from(EpiWeek{2023, 50}, 6)) {
        cases.push_back(case_week(3106200, week, 40 + week.week));
        cases.push_back(case_week(3304557, week, 7, Disease::zika));
    }
    cases[0].municipio_nome = "Belo Horizonte";
    cases[0].casos_prov = 3;
    c.expect(round_trips(*store, datastore::DatasetKind::infodengue, cases), "infodengue round trip");
    c.expect(round_trips(*store, datastore::DatasetKind::climate,
                         std::vector{climate_day(CivilDate::from_ymd(2024, 1, 1)),
                                     climate_day(CivilDate::from_ymd(2024, 1, 2))}),
             "climate round trip");
    c.expect(round_trips(*store, datastore::DatasetKind::episcanner, std::vector{epi_params()}),
             "episcanner round trip");
    c.expect(round_trips(*store, datastore::DatasetKind::ovitrap,
                         std::vector{trap("MG-001", 0), trap("MG-002", 57)}),
             "ovitrap round trip");

    const auto before = store->select(datastore::DatasetKind::infodengue, {});
    std::istringstream again(to_csv(datastore::DatasetKind::infodengue, cases));
    const auto second = datastore::ingest_dataset(*store, datastore::DatasetKind::infodengue, again);
    c.expect(second.inserted == 0 && second.updated == cases.size(), "second ingest inserted rows");
    c.expect(store->select(datastore::DatasetKind::infodengue, {}) == before, "second ingest changed state");

    TempDir other;
    auto fresh = open_store(other);
    auto text = to_csv(datastore::DatasetKind::infodengue, cases);
    auto lines = std::vector<std::string>{};
    {
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);) lines.push_back(line);
    }
    // Third data row (file line 4) gets nivel=7.
    auto header = lines[0];
    std::size_t nivel_col = 0;
    for (std::size_t i = 0, col = 0; i < header.size(); ++i) {
        if (header.compare(i, 6, "nivel,") == 0 && (i == 0 || header[i - 1] == ',')) nivel_col = col;
        if (header[i] == ',') ++col;
    }
    std::vector<std::string> cells;
    {
        std::string cell;
        std::istringstream in(lines[3]);
        while (std::getline(in, cell, ',')) cells.push_back(cell);
    }
    cells[nivel_col] = "7";
    std::string bad;
    for (std::size_t i = 0; i < cells.size(); ++i) bad += (i ? "," : "") + cells[i];
    lines[3] = bad;
    std::string joined;
    for (const auto& l : lines) joined += l + "\n";
    std::istringstream mixed(joined);
    const auto report = datastore::ingest_dataset(*fresh, datastore::DatasetKind::infodengue, mixed);
    c.expect(report.rejected == 1 && report.inserted == cases.size() - 1, "mixed file counts");
    c.expect(report.rejections.size() == 1 && report.rejections[0].line == 4 &&
                 report.rejections[0].reason.find("nivel") != std::string::npos,
             "nivel rejection reason");
    c.expect(fresh->select(datastore::DatasetKind::infodengue, {}).size() == cases.size() - 1,
             "valid rows did not land");
    return c.done("four kinds round trip; re-ingest updates " + std::to_string(second.updated) +
                  " rows with no change; nivel=7 line 4 rejected (" +
                  (report.rejections.empty() ? std::string{} : report.rejections[0].reason) + ")");
}

Outcome offline_online_parity() {
    Checks c;
    LiveServer server;
    TempDir files;
    const auto key = server.issue_key("acceptance");
    const auto cases = mg_cases();
    server.ingest(datastore::DatasetKind::infodengue, to_csv(datastore::DatasetKind::infodengue, cases));
    {
        std::ofstream(files.path() / "observed.csv") << to_csv(datastore::DatasetKind::infodengue, cases);
    }
    const auto model = call(server, "POST", "/api/registry/models", key, model_meta(1)).body["id"].get<std::int64_t>();
    const std::vector<std::pair<double, double>> fixtures{{0.0, 2.0}, {3.5, 10.0}, {-7.25, 0.5}, {40.0, 1.0}, {1.0, 100.0}};
    double worst = 0.0;
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        const auto rows = mg_rows(fixtures[i].first, fixtures[i].second);
        const auto id = call(server, "POST", "/api/registry/predictions", key, submission(model, rows)).body["id"];
        const auto remote = call(server, "GET", "/api/registry/predictions/" + id.dump() + "/score").body;
        const auto path = files.path() / ("rows" + std::to_string(i) + ".json");
        {
            std::ofstream(path) << rows.dump();
        }
        std::ostringstream out, err;
        client::ScoreOptions options;
        options.prediction = path;
        options.observed = files.path() / "observed.csv";
        const int code = client::score_command(options, {out, err});
        c.expect(code == 0, "offline score exit " + std::to_string(code) + ": " + err.str());
        if (code != 0) continue;
        const auto local = json::parse(out.str());
        c.expect(local["n_matched"] == remote["n_matched"], "n_matched differs");
        for (const auto& [metric, value] : remote["scores"].items()) {
            const double d = std::abs(local["scores"][metric].get<double>() - value.get<double>());
            worst = std::max(worst, d);
            c.expect(d <= 1e-9, metric + fmt(" |d|=%.3g", d));
        }
    }
    return c.done(std::to_string(fixtures.size()) + " fixtures, max |d| " + fmt("%.2e", worst));
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::warn);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"crps oracle equivalence", crps_oracle_equivalence},
        {"analytic spot values", analytic_spot_values},
        {"crps properties", crps_properties},
        {"validation protocol", validation_protocol},
        {"pagination invariant", pagination_invariant},
        {"end-to-end", end_to_end},
        {"epi-week oracle", epiweek_oracle},
        {"ingestion", ingestion},
        {"offline/online parity", offline_online_parity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string{"exception: "} + e.what()};
        }
        if (!outcome.pass) ++failed;
        std::printf("%s %zu %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
