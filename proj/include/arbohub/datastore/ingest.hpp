#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arbohub/datastore/dataset_store.hpp"
#include "arbohub/datastore/records.hpp"

namespace arbohub::datastore {

// Whole-file rejection: unknown kind, unreadable CSV or missing columns.
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RowRejection {
    std::size_t line = 0;  // 1-based line in the source
    std::string reason;
};

struct IngestReport {
    std::size_t read = 0;
    std::size_t inserted = 0;
    std::size_t updated = 0;
    std::size_t rejected = 0;
    std::vector<RowRejection> rejections;
};

nlohmann::json to_json(const IngestReport& report);

struct IngestOptions {
    // Disease for infodengue files that carry no disease column.
    std::optional<Disease> disease;
};

struct ParsedDataset {
    std::vector<DatasetRecord> records;
    std::size_t read = 0;
    std::vector<RowRejection> rejections;
};

// Parses and validates every row. Nullable columns may be omitted from the
// header; every other dictionary column must be present. Columns outside the
// dictionary are ignored. Throws IngestError for whole-file problems.
ParsedDataset parse_dataset_csv(DatasetKind kind, std::istream& source,
                                const IngestOptions& options = {});

// Parses, then upserts all valid rows in one transaction.
IngestReport ingest_dataset(DatasetStore& store, DatasetKind kind, std::istream& source,
                            const IngestOptions& options = {});
IngestReport ingest_dataset(DatasetStore& store, std::string_view kind, std::istream& source,
                            const IngestOptions& options = {});

}  // namespace arbohub::datastore
