#include "arbohub/service/registry_store.hpp"

#include <chrono>
#include <ctime>

#include "arbohub/service/api_keys.hpp"

namespace arbohub::service {

namespace sql = datastore::sql;

namespace {

std::string utc_now_iso() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Account read_account(const sql::Statement& s) {
    return Account{s.column_int64(0), s.column_text(1), s.column_text(2), s.column_int64(3) != 0};
}

struct Where {
    std::string sql;
    std::vector<sql::Value> params;

    void add(std::string term, sql::Value value) {
        sql += sql.empty() ? " WHERE " : " AND ";
        sql += std::move(term);
        params.push_back(std::move(value));
    }
    void add(std::string term, std::vector<sql::Value> values) {
        sql += sql.empty() ? " WHERE " : " AND ";
        sql += std::move(term);
        for (auto& v : values) params.push_back(std::move(v));
    }
};

template <class T, class Parse>
Page<T> paged(sql::Connection& conn, const std::string& from, const Where& where,
              PageRequest request, Parse&& parse) {
    sql::Transaction tx(conn, sql::Transaction::Mode::deferred);
    auto count = conn.prepare("SELECT COUNT(*) FROM " + from + where.sql);
    count.bind_all(where.params);
    count.step();
    Page<T> out;
    out.pagination = datastore::make_pagination(request, count.column_int64(0));
    if (request.page <= out.pagination.total_pages) {
        auto rows = conn.prepare("SELECT payload FROM " + from + where.sql +
                                 " ORDER BY id LIMIT ? OFFSET ?");
        auto params = where.params;
        params.emplace_back(request.per_page);
        params.emplace_back((request.page - 1) * request.per_page);
        rows.bind_all(params);
        while (rows.step()) out.items.push_back(parse(nlohmann::json::parse(rows.column_text(0))));
    }
    tx.commit();
    return out;
}

}  // namespace

RegistryStore::RegistryStore(std::shared_ptr<sql::ConnectionPool> pool) : pool_(std::move(pool)) {
    auto conn = pool_->acquire();
    conn->exec(R"(
        CREATE TABLE IF NOT EXISTS accounts (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            name TEXT NOT NULL,
            created_at TEXT NOT NULL,
            active INTEGER NOT NULL,
            key_id TEXT NOT NULL UNIQUE,
            salt TEXT NOT NULL,
            key_hash TEXT NOT NULL);
        CREATE TABLE IF NOT EXISTS models (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            owner INTEGER NOT NULL REFERENCES accounts(id),
            name TEXT NOT NULL,
            disease TEXT NOT NULL,
            adm_level INTEGER NOT NULL,
            time_resolution TEXT NOT NULL,
            sprint INTEGER NOT NULL,
            payload TEXT NOT NULL);
        CREATE TABLE IF NOT EXISTS predictions (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            model_id INTEGER NOT NULL REFERENCES models(id),
            created_at TEXT NOT NULL,
            payload TEXT NOT NULL);
        CREATE TABLE IF NOT EXISTS prediction_rows (
            prediction_id INTEGER NOT NULL REFERENCES predictions(id),
            date TEXT NOT NULL,
            adm_1 TEXT);
        CREATE INDEX IF NOT EXISTS prediction_rows_id ON prediction_rows (prediction_id);
        CREATE INDEX IF NOT EXISTS predictions_model ON predictions (model_id);
    )");
}

IssuedKey RegistryStore::create_account(const std::string& name) {
    const auto key = generate_api_key();
    auto conn = pool_->acquire();
    sql::Transaction tx(*conn, sql::Transaction::Mode::immediate);
    Account account{0, name, utc_now_iso(), true};
    conn->prepare(
            "INSERT INTO accounts (name, created_at, active, key_id, salt, key_hash) "
            "VALUES (?, ?, 1, ?, ?, ?)")
        .bind_all({account.name, account.created_at, key.key_id, key.salt_hex, key.hash_hex})
        .step();
    account.id = conn->last_insert_rowid();
    tx.commit();
    return {account, key.token};
}

bool RegistryStore::set_account_active(std::int64_t id, bool active) {
    auto conn = pool_->acquire();
    sql::Transaction tx(*conn, sql::Transaction::Mode::immediate);
    auto found = conn->prepare("SELECT 1 FROM accounts WHERE id = ?");
    found.bind(1, id);
    if (!found.step()) return false;
    conn->prepare("UPDATE accounts SET active = ? WHERE id = ?")
        .bind_all({std::int64_t{active ? 1 : 0}, id})
        .step();
    tx.commit();
    return true;
}

std::optional<Account> RegistryStore::account(std::int64_t id) const {
    auto conn = pool_->acquire();
    auto s = conn->prepare("SELECT id, name, created_at, active FROM accounts WHERE id = ?");
    s.bind(1, id);
    if (!s.step()) return std::nullopt;
    return read_account(s);
}

std::optional<Account> RegistryStore::authenticate(std::string_view token) const {
    const auto parts = split_token(token);
    if (!parts) return std::nullopt;
    auto conn = pool_->acquire();
    auto s = conn->prepare(
        "SELECT id, name, created_at, active, salt, key_hash FROM accounts WHERE key_id = ?");
    s.bind(1, parts->key_id);
    if (!s.step()) return std::nullopt;
    auto account = read_account(s);
    if (!account.active || !verify_secret(parts->secret, s.column_text(4), s.column_text(5))) {
        return std::nullopt;
    }
    return account;
}

ModelRecord RegistryStore::insert_model(ModelRecord model) {
    auto conn = pool_->acquire();
    sql::Transaction tx(*conn, sql::Transaction::Mode::immediate);
    conn->prepare(
            "INSERT INTO models (owner, name, disease, adm_level, time_resolution, sprint, payload)"
            " VALUES (?, ?, ?, ?, ?, ?, '')")
        .bind_all({model.owner, model.name, std::string{to_string(model.disease)},
                   std::int64_t{to_int(model.adm_level)},
                   std::string{to_string(model.time_resolution)},
                   std::int64_t{model.sprint ? 1 : 0}})
        .step();
    model.id = conn->last_insert_rowid();
    conn->prepare("UPDATE models SET payload = ? WHERE id = ?")
        .bind_all({to_json(model).dump(), model.id})
        .step();
    tx.commit();
    return model;
}

std::optional<ModelRecord> RegistryStore::model(std::int64_t id) const {
    auto conn = pool_->acquire();
    auto s = conn->prepare("SELECT payload FROM models WHERE id = ?");
    s.bind(1, id);
    if (!s.step()) return std::nullopt;
    return model_from_json(nlohmann::json::parse(s.column_text(0)));
}

Page<ModelRecord> RegistryStore::models(const ModelFilters& f, PageRequest page) const {
    Where w;
    if (f.name) w.add("instr(lower(name), lower(?)) > 0", *f.name);
    if (f.disease) w.add("disease = ?", std::string{to_string(*f.disease)});
    if (f.adm_level) w.add("adm_level = ?", std::int64_t{to_int(*f.adm_level)});
    if (f.time_resolution) w.add("time_resolution = ?", std::string{to_string(*f.time_resolution)});
    if (f.sprint) w.add("sprint = ?", std::int64_t{*f.sprint ? 1 : 0});
    auto conn = pool_->acquire();
    return paged<ModelRecord>(*conn, "models", w, page, [](const nlohmann::json& j) {
        return model_from_json(j);
    });
}

std::int64_t RegistryStore::insert_prediction(PredictionRecord prediction) {
    auto conn = pool_->acquire();
    sql::Transaction tx(*conn, sql::Transaction::Mode::immediate);
    conn->prepare("INSERT INTO predictions (model_id, created_at, payload) VALUES (?, ?, '')")
        .bind_all({prediction.model, utc_now_iso()})
        .step();
    prediction.id = conn->last_insert_rowid();
    conn->prepare("UPDATE predictions SET payload = ? WHERE id = ?")
        .bind_all({to_json(prediction).dump(), prediction.id})
        .step();
    auto row = conn->prepare("INSERT INTO prediction_rows (prediction_id, date, adm_1) VALUES (?, ?, ?)");
    for (const auto& r : prediction.rows) {
        row.reset();
        row.bind_all({prediction.id, r.date.to_string(),
                      r.adm_1 ? sql::Value{*r.adm_1} : sql::Value{}});
        row.step();
    }
    tx.commit();
    return prediction.id;
}

std::optional<PredictionRecord> RegistryStore::prediction(std::int64_t id) const {
    auto conn = pool_->acquire();
    auto s = conn->prepare("SELECT payload FROM predictions WHERE id = ?");
    s.bind(1, id);
    if (!s.step()) return std::nullopt;
    return prediction_from_json(nlohmann::json::parse(s.column_text(0)));
}

Page<PredictionRecord> RegistryStore::predictions(const PredictionFilters& f,
                                                  PageRequest page) const {
    Where w;
    if (f.model_id) w.add("model_id = ?", *f.model_id);
    if (f.disease) {
        w.add("model_id IN (SELECT id FROM models WHERE disease = ?)",
              std::string{to_string(*f.disease)});
    }
    if (f.adm_1 || f.start || f.end) {
        std::string term = "id IN (SELECT prediction_id FROM prediction_rows WHERE 1";
        std::vector<sql::Value> values;
        if (f.adm_1) {
            term += " AND adm_1 = ?";
            values.emplace_back(*f.adm_1);
        }
        if (f.start) {
            term += " AND date >= ?";
            values.emplace_back(f.start->to_string());
        }
        if (f.end) {
            term += " AND date <= ?";
            values.emplace_back(f.end->to_string());
        }
        w.add(term + ")", std::move(values));
    }
    auto conn = pool_->acquire();
    return paged<PredictionRecord>(*conn, "predictions", w, page, [](const nlohmann::json& j) {
        return prediction_from_json(j);
    });
}

}  // namespace arbohub::service
