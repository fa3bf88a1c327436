#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ids {

// One parsed CSV column. Numeric columns keep a missing-value mask; empty
// cells and the textual markers (NaN, nan, Infinity, inf, -inf, case
// insensitive) parse to NaN / +-inf as documented for the input format.
struct NumericColumn {
    std::vector<double> values; // NaN where missing
};

struct IntegerColumn {
    std::vector<std::int64_t> values;
    std::vector<bool> missing;
};

struct TextColumn {
    std::vector<std::string> values; // empty string = missing
};

using Column = std::variant<NumericColumn, IntegerColumn, TextColumn>;

struct RawTable {
    std::vector<std::string> column_names; // as read, untrimmed
    std::vector<Column> columns;
    std::int64_t row_count = 0;
};

// RFC 4180 reader. Quoted fields may contain commas, escaped quotes and
// newlines. A record whose field count differs from the header is a hard
// error naming the record index. Column types are inferred: a column where
// every non-missing cell parses as an integer is integer-64, where every
// cell parses as a number it is numeric-64, otherwise text.
RawTable load_csv(const std::string& path, bool has_header = true);

// Parses one cell the same way load_csv does. Returns nullopt when the cell
// is not numeric; missing markers yield NaN / +-inf.
std::optional<double> parse_numeric_cell(const std::string& cell);

// Shortest decimal text that round-trips the value exactly.
std::string format_float(float v);
std::string format_double(double v);

// Quotes per RFC 4180 when the field contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

// Splits a full CSV document into records of fields (used by the reader and
// by tests that need record-level access).
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text);

} // namespace ids
