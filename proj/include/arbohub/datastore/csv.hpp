#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace arbohub::datastore {

// RFC 4180 reader: comma separated, double-quote quoting with "" escapes,
// LF or CRLF record ends, quoted fields may span lines. A leading UTF-8 BOM is
// skipped.
class CsvReader {
public:
    explicit CsvReader(std::istream& in);

    // Reads the next record into `fields`. Returns false at end of input.
    // Throws std::runtime_error on an unterminated quoted field.
    bool next(std::vector<std::string>& fields);

    // 1-based line number where the last returned record started.
    std::size_t line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
    bool at_start_ = true;
};

void write_csv_record(std::ostream& out, const std::vector<std::string>& fields);
std::string csv_escape(std::string_view field);

}  // namespace arbohub::datastore
