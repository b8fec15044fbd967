#include <gtest/gtest.h>

#include <sstream>

#include "arbohub/datastore/csv.hpp"

using arbohub::datastore::CsvReader;
using arbohub::datastore::csv_escape;
using arbohub::datastore::write_csv_record;

namespace {

std::vector<std::vector<std::string>> read_all(const std::string& text,
                                               std::vector<std::size_t>* lines = nullptr) {
    std::istringstream in(text);
    CsvReader reader(in);
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        out.push_back(fields);
        if (lines) lines->push_back(reader.line());
    }
    return out;
}

}  // namespace

TEST(CsvReader, QuotedFieldsAndEscapes) {
    auto rows = read_all("a,b,c\n\"x,y\",\"say \"\"hi\"\"\",\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1], (std::vector<std::string>{"x,y", "say \"hi\"", ""}));
}

TEST(CsvReader, CrlfBomAndBlankLines) {
    std::vector<std::size_t> lines;
    auto rows = read_all("\xEF\xBB\xBFh1,h2\r\n\r\n1,2\r\n", &lines);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][0], "h1");
    EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "2"}));
    EXPECT_EQ(lines, (std::vector<std::size_t>{1, 3}));
}

TEST(CsvReader, QuotedNewlineKeepsStartLine) {
    std::vector<std::size_t> lines;
    auto rows = read_all("h\n\"two\nlines\"\nnext\n", &lines);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1][0], "two\nlines");
    EXPECT_EQ(lines, (std::vector<std::size_t>{1, 2, 4}));
}

TEST(CsvReader, UnterminatedQuoteThrows) {
    EXPECT_THROW(read_all("a\n\"open\n"), std::runtime_error);
}

TEST(CsvWriter, RoundTripsAwkwardFields) {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "line\nbreak", ""};
    std::ostringstream out;
    write_csv_record(out, fields);
    auto rows = read_all(out.str());
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0], fields);
    EXPECT_EQ(csv_escape("plain"), "plain");
}
