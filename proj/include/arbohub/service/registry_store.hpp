#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "arbohub/datastore/dataset_store.hpp"
#include "arbohub/datastore/sqlite.hpp"
#include "arbohub/domain/account.hpp"
#include "arbohub/domain/model.hpp"
#include "arbohub/domain/prediction.hpp"

namespace arbohub::service {

using datastore::Page;
using datastore::PageRequest;

struct IssuedKey {
    Account account;
    std::string token;  // shown once, never stored
};

struct ModelFilters {
    std::optional<std::string> name;  // case-insensitive substring
    std::optional<Disease> disease;
    std::optional<AdmLevel> adm_level;
    std::optional<TimeResolution> time_resolution;
    std::optional<bool> sprint;
};

// Row-level filters match predictions having at least one row that satisfies
// adm_1, start and end together.
struct PredictionFilters {
    std::optional<std::int64_t> model_id;
    std::optional<Disease> disease;
    std::optional<std::string> adm_1;
    std::optional<CivilDate> start;
    std::optional<CivilDate> end;
};

// Accounts, models and predictions in one SQLite database.
class RegistryStore {
public:
    explicit RegistryStore(std::shared_ptr<datastore::sql::ConnectionPool> pool);

    IssuedKey create_account(const std::string& name);
    // Returns false when no such account exists.
    bool set_account_active(std::int64_t id, bool active);
    std::optional<Account> account(std::int64_t id) const;
    // The active account owning `token`, if any.
    std::optional<Account> authenticate(std::string_view token) const;

    ModelRecord insert_model(ModelRecord model);
    std::optional<ModelRecord> model(std::int64_t id) const;
    Page<ModelRecord> models(const ModelFilters& filters, PageRequest page) const;

    std::int64_t insert_prediction(PredictionRecord prediction);
    std::optional<PredictionRecord> prediction(std::int64_t id) const;
    Page<PredictionRecord> predictions(const PredictionFilters& filters, PageRequest page) const;

private:
    std::shared_ptr<datastore::sql::ConnectionPool> pool_;
};

}  // namespace arbohub::service
