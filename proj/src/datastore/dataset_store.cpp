#include "arbohub/datastore/dataset_store.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "arbohub/domain/geo.hpp"

namespace arbohub::datastore {

Pagination make_pagination(PageRequest request, std::int64_t total_items) {
    Pagination p;
    p.page = request.page;
    p.per_page = request.per_page;
    p.total_items = total_items;
    p.total_pages = request.per_page > 0 ? (total_items + request.per_page - 1) / request.per_page : 0;
    return p;
}

nlohmann::json to_json(const Pagination& p) {
    return {{"page", p.page},
            {"per_page", p.per_page},
            {"total_items", p.total_items},
            {"total_pages", p.total_pages}};
}

namespace {

bool kind_has_disease(DatasetKind kind) {
    return kind == DatasetKind::infodengue || kind == DatasetKind::episcanner;
}

std::optional<std::int64_t> parse_int(const std::string& s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

ValidationErrors check_query(DatasetKind kind, const DatasetFilters& filters, PageRequest page,
                             std::int64_t max_per_page) {
    ValidationErrors errors;
    if (page.page < 1) errors.push_back({"page", "must be >= 1", std::nullopt});
    if (page.per_page < 1 || page.per_page > max_per_page) {
        errors.push_back(
            {"per_page", "must be between 1 and " + std::to_string(max_per_page), std::nullopt});
    }
    if (filters.disease && !kind_has_disease(kind)) {
        errors.push_back({"disease", "unknown filter for " + std::string{to_string(kind)},
                          std::nullopt});
    }
    if (filters.start && filters.end && *filters.start > *filters.end) {
        errors.push_back({"start", "must not be after end", std::nullopt});
    }
    return errors;
}

}  // namespace

std::vector<std::string> filter_names(DatasetKind kind) {
    std::vector<std::string> names;
    if (kind_has_disease(kind)) names.emplace_back("disease");
    for (const char* n : {"geocode", "uf", "start", "end"}) names.emplace_back(n);
    return names;
}

Validated<DatasetQuery> parse_dataset_query(
    DatasetKind kind, const std::vector<std::pair<std::string, std::string>>& params,
    std::int64_t max_per_page) {
    Validated<DatasetQuery> out;
    DatasetQuery q;
    auto& errors = out.errors;
    const auto allowed = filter_names(kind);
    std::set<std::string> seen;

    for (const auto& [name, value] : params) {
        if (!seen.insert(name).second) {
            errors.push_back({name, "repeated parameter", std::nullopt});
            continue;
        }
        if (name == "page" || name == "per_page") {
            auto v = parse_int(value);
            if (!v) {
                errors.push_back({name, "must be an integer", std::nullopt});
            } else {
                (name == "page" ? q.page.page : q.page.per_page) = *v;
            }
        } else if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
            errors.push_back(
                {name, "unknown filter for " + std::string{to_string(kind)}, std::nullopt});
        } else if (name == "disease") {
            if (auto d = parse_disease(value)) {
                q.filters.disease = *d;
            } else {
                errors.push_back({name, "must be one of dengue, zika, chikungunya", std::nullopt});
            }
        } else if (name == "geocode") {
            auto v = parse_int(value);
            if (v && geo::is_municipality_geocode(*v)) {
                q.filters.geocode = *v;
            } else {
                errors.push_back({name, "must be a 7-digit municipality geocode", std::nullopt});
            }
        } else if (name == "uf") {
            if (auto uf = geo::normalize_uf(value)) {
                q.filters.uf = *uf;
            } else {
                errors.push_back({name, "must be a state UF", std::nullopt});
            }
        } else {  // start / end
            if (auto d = CivilDate::parse(value)) {
                (name == "start" ? q.filters.start : q.filters.end) = *d;
            } else {
                errors.push_back({name, "must be a YYYY-mm-dd date", std::nullopt});
            }
        }
    }
    for (auto& e : check_query(kind, q.filters, q.page, max_per_page)) {
        const bool seen = std::any_of(errors.begin(), errors.end(),
                                      [&](const FieldError& x) { return x.field == e.field; });
        if (!seen) errors.push_back(std::move(e));
    }
    if (errors.empty()) out.value = std::move(q);
    return out;
}

Page<DatasetRecord> query_dataset(const DatasetStore& store, DatasetKind kind,
                                  const DatasetFilters& filters, PageRequest page,
                                  std::int64_t max_per_page) {
    if (auto errors = check_query(kind, filters, page, max_per_page); !errors.empty()) {
        throw ValidationFailure(std::move(errors));
    }
    return store.query(kind, filters, page);
}

// ---------------------------------------------------------------------------
// SQLite layout: one table per kind with the natural key in k1..k3 (k3 is 0
// for two-part keys), denormalized filter columns, and the record as JSON.

namespace {

struct StoredRow {
    std::array<sql::Value, 3> key;
    sql::Value disease;
    std::int64_t geocode = 0;
    std::string uf;
    sql::Value period;
    std::string payload;
};

std::string table_of(DatasetKind kind) { return "ds_" + std::string{to_string(kind)}; }

std::string uf_text(std::int64_t geocode) { return geo::uf_of_geocode(geocode).value_or(""); }

StoredRow describe(const DatasetRecord& record) {
    StoredRow row;
    row.payload = record_to_json(record).dump();
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, CaseWeekRecord>) {
                row.key = {std::string{to_string(r.disease)}, r.municipio_geocodigo,
                           std::int64_t{r.SE.encoded()}};
                row.disease = std::string{to_string(r.disease)};
                row.geocode = r.municipio_geocodigo;
                row.period = r.data_iniSE.to_string();
            } else if constexpr (std::is_same_v<R, ClimateDayRecord>) {
                row.key = {r.geocodigo, r.date.to_string(), std::int64_t{0}};
                row.geocode = r.geocodigo;
                row.period = r.date.to_string();
            } else if constexpr (std::is_same_v<R, EpidemicParamsRecord>) {
                row.key = {r.disease, r.geocode, std::int64_t{r.year}};
                row.disease = r.disease;
                row.geocode = r.geocode;
                row.period = std::int64_t{r.year};
            } else {
                row.key = {r.trap_id, r.collection_date.to_string(), std::int64_t{0}};
                row.geocode = r.geocode;
                row.period = r.collection_date.to_string();
            }
        },
        record);
    row.uf = uf_text(row.geocode);
    return row;
}

struct WhereClause {
    std::string sql;
    std::vector<sql::Value> params;
};

WhereClause where_clause(DatasetKind kind, const DatasetFilters& f) {
    WhereClause w;
    std::vector<std::string> terms;
    if (f.disease) {
        const auto aliases = disease_aliases(*f.disease);
        std::string in = "disease IN (";
        for (std::size_t i = 0; i < aliases.size(); ++i) {
            in += i ? ",?" : "?";
            w.params.emplace_back(aliases[i]);
        }
        terms.push_back(in + ")");
    }
    if (f.geocode) {
        terms.emplace_back("geocode = ?");
        w.params.emplace_back(*f.geocode);
    }
    if (f.uf) {
        terms.emplace_back("uf = ?");
        w.params.emplace_back(geo::normalize_uf(*f.uf).value_or(*f.uf));
    }
    auto bound = [&](const CivilDate& d) -> sql::Value {
        if (kind == DatasetKind::episcanner) return std::int64_t{d.year()};
        return d.to_string();
    };
    if (f.start) {
        terms.emplace_back("period >= ?");
        w.params.push_back(bound(*f.start));
    }
    if (f.end) {
        terms.emplace_back("period <= ?");
        w.params.push_back(bound(*f.end));
    }
    for (std::size_t i = 0; i < terms.size(); ++i) w.sql += (i ? " AND " : " WHERE ") + terms[i];
    return w;
}

}  // namespace

SqliteDatasetStore::SqliteDatasetStore(std::shared_ptr<sql::ConnectionPool> pool)
    : pool_(std::move(pool)) {
    auto conn = pool_->acquire();
    for (auto kind : kAllKinds) {
        const auto t = table_of(kind);
        conn->exec("CREATE TABLE IF NOT EXISTS " + t +
                   " (k1, k2, k3, disease TEXT, geocode INTEGER, uf TEXT, period, "
                   "payload TEXT NOT NULL, PRIMARY KEY (k1, k2, k3)) WITHOUT ROWID");
        for (const char* col : {"disease", "geocode", "uf", "period"}) {
            conn->exec("CREATE INDEX IF NOT EXISTS " + t + "_" + col + " ON " + t + " (" + col +
                       ")");
        }
    }
}

UpsertCounts SqliteDatasetStore::upsert(DatasetKind kind, std::span<const DatasetRecord> records) {
    std::lock_guard guard(write_locks_[static_cast<std::size_t>(kind)]);
    auto conn = pool_->acquire();
    sql::Transaction tx(*conn, sql::Transaction::Mode::immediate);
    const auto t = table_of(kind);
    auto exists = conn->prepare("SELECT 1 FROM " + t + " WHERE k1 = ? AND k2 = ? AND k3 = ?");
    auto write = conn->prepare("INSERT OR REPLACE INTO " + t +
                               " (k1, k2, k3, disease, geocode, uf, period, payload) "
                               "VALUES (?, ?, ?, ?, ?, ?, ?, ?)");
    UpsertCounts counts;
    for (const auto& record : records) {
        if (kind_of(record) != kind) throw std::invalid_argument("record kind mismatch");
        const auto row = describe(record);
        exists.reset();
        exists.bind_all({row.key[0], row.key[1], row.key[2]});
        const bool present = exists.step();
        write.reset();
        write.bind_all({row.key[0], row.key[1], row.key[2], row.disease, row.geocode, row.uf,
                        row.period, row.payload});
        write.step();
        ++(present ? counts.updated : counts.inserted);
    }
    tx.commit();
    return counts;
}

Page<DatasetRecord> SqliteDatasetStore::query(DatasetKind kind, const DatasetFilters& filters,
                                              PageRequest page) const {
    const auto where = where_clause(kind, filters);
    const auto t = table_of(kind);
    auto conn = pool_->acquire();
    sql::Transaction tx(*conn, sql::Transaction::Mode::deferred);

    auto count = conn->prepare("SELECT COUNT(*) FROM " + t + where.sql);
    count.bind_all(where.params);
    count.step();
    Page<DatasetRecord> out;
    out.pagination = make_pagination(page, count.column_int64(0));

    if (page.page > out.pagination.total_pages) {
        tx.commit();
        return out;
    }
    auto rows = conn->prepare("SELECT payload FROM " + t + where.sql +
                              " ORDER BY k1, k2, k3 LIMIT ? OFFSET ?");
    auto params = where.params;
    params.emplace_back(page.per_page);
    params.emplace_back((page.page - 1) * page.per_page);
    rows.bind_all(params);
    while (rows.step()) {
        out.items.push_back(record_from_json(kind, nlohmann::json::parse(rows.column_text(0))));
    }
    tx.commit();
    return out;
}

std::vector<DatasetRecord> SqliteDatasetStore::select(DatasetKind kind,
                                                      const DatasetFilters& filters) const {
    const auto where = where_clause(kind, filters);
    auto conn = pool_->acquire();
    sql::Transaction tx(*conn, sql::Transaction::Mode::deferred);
    auto rows = conn->prepare("SELECT payload FROM " + table_of(kind) + where.sql +
                              " ORDER BY k1, k2, k3");
    rows.bind_all(where.params);
    std::vector<DatasetRecord> out;
    while (rows.step()) {
        out.push_back(record_from_json(kind, nlohmann::json::parse(rows.column_text(0))));
    }
    tx.commit();
    return out;
}

}  // namespace arbohub::datastore
