#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arbohub/datastore/records.hpp"
#include "arbohub/datastore/sqlite.hpp"
#include "arbohub/domain/validation.hpp"

namespace arbohub::datastore {

inline constexpr std::int64_t kDefaultPerPage = 100;
inline constexpr std::int64_t kDefaultMaxPerPage = 300;

// Conjunctive filters. Date bounds are inclusive and apply to data_iniSE
// (infodengue), date (climate), year (episcanner) or collection_date
// (ovitrap).
struct DatasetFilters {
    std::optional<Disease> disease;
    std::optional<std::int64_t> geocode;
    std::optional<std::string> uf;
    std::optional<CivilDate> start;
    std::optional<CivilDate> end;
};

struct PageRequest {
    std::int64_t page = 1;
    std::int64_t per_page = kDefaultPerPage;
};

struct Pagination {
    std::int64_t page = 1;
    std::int64_t per_page = kDefaultPerPage;
    std::int64_t total_items = 0;
    std::int64_t total_pages = 0;

    friend bool operator==(const Pagination&, const Pagination&) = default;
};

template <class T>
struct Page {
    std::vector<T> items;
    Pagination pagination;
};

Pagination make_pagination(PageRequest request, std::int64_t total_items);
nlohmann::json to_json(const Pagination& pagination);

// {"items": [...], "pagination": {...}}
template <class T, class ToJson>
nlohmann::json page_envelope(const Page<T>& page, ToJson&& item_to_json) {
    auto items = nlohmann::json::array();
    for (const auto& item : page.items) items.push_back(item_to_json(item));
    return {{"items", std::move(items)}, {"pagination", to_json(page.pagination)}};
}

// Filter parameter names accepted for a kind, besides page and per_page.
std::vector<std::string> filter_names(DatasetKind kind);

struct DatasetQuery {
    DatasetFilters filters;
    PageRequest page;
};

// Reads page, per_page and the kind's filters from query-string pairs.
// Unknown names, malformed values and out-of-range paging are all reported.
Validated<DatasetQuery> parse_dataset_query(
    DatasetKind kind, const std::vector<std::pair<std::string, std::string>>& params,
    std::int64_t max_per_page = kDefaultMaxPerPage);

struct UpsertCounts {
    std::size_t inserted = 0;
    std::size_t updated = 0;
};

// Storage behind the four observed datasets.
class DatasetStore {
public:
    virtual ~DatasetStore() = default;

    // Insert-or-replace by natural key; all records land or none do.
    virtual UpsertCounts upsert(DatasetKind kind, std::span<const DatasetRecord> records) = 0;

    // One page of matching records in natural-key order. The total and the
    // page are read from the same snapshot.
    virtual Page<DatasetRecord> query(DatasetKind kind, const DatasetFilters& filters,
                                      PageRequest page) const = 0;

    // Every matching record in natural-key order.
    virtual std::vector<DatasetRecord> select(DatasetKind kind,
                                              const DatasetFilters& filters) const = 0;
};

// Validates paging and filter applicability, then queries. Throws
// ValidationFailure.
Page<DatasetRecord> query_dataset(const DatasetStore& store, DatasetKind kind,
                                  const DatasetFilters& filters, PageRequest page,
                                  std::int64_t max_per_page = kDefaultMaxPerPage);

class SqliteDatasetStore final : public DatasetStore {
public:
    explicit SqliteDatasetStore(std::shared_ptr<sql::ConnectionPool> pool);

    UpsertCounts upsert(DatasetKind kind, std::span<const DatasetRecord> records) override;
    Page<DatasetRecord> query(DatasetKind kind, const DatasetFilters& filters,
                              PageRequest page) const override;
    std::vector<DatasetRecord> select(DatasetKind kind,
                                      const DatasetFilters& filters) const override;

private:
    std::shared_ptr<sql::ConnectionPool> pool_;
    std::array<std::mutex, kAllKinds.size()> write_locks_;
};

}  // namespace arbohub::datastore
