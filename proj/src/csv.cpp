#include "ids/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ids/errors.hpp"

namespace ids {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_int64(const std::string& s, std::int64_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && first != last;
}

bool parse_f64(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
    return ec == std::errc() && ptr == last && first != last;
}

} // namespace

std::optional<double> parse_numeric_cell(const std::string& raw) {
    const std::string cell = trim(raw);
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    const std::string lo = lower(cell);
    if (lo == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (lo == "inf" || lo == "+inf" || lo == "infinity" || lo == "+infinity")
        return std::numeric_limits<double>::infinity();
    if (lo == "-inf" || lo == "-infinity")
        return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    if (parse_f64(cell, v)) return v;
    return std::nullopt;
}

std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool any_field_content = false; // true once the current record has content

    const std::size_t n = text.size();
    for (std::size_t i = 0; i < n; ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                any_field_content = true;
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                any_field_content = true;
                break;
            case '\r':
                break; // handled with the following \n (or ignored if stray)
            case '\n':
                if (!fields.empty() || !field.empty() || any_field_content) {
                    fields.push_back(std::move(field));
                    field.clear();
                    records.push_back(std::move(fields));
                    fields.clear();
                    any_field_content = false;
                }
                break;
            default:
                field.push_back(c);
                any_field_content = true;
                break;
        }
    }
    if (in_quotes) throw DataError("csv: unterminated quoted field at end of input");
    if (!fields.empty() || !field.empty() || any_field_content) {
        fields.push_back(std::move(field));
        records.push_back(std::move(fields));
    }
    return records;
}

RawTable load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("csv: cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw DataError("csv: read failure: " + path);

    const auto records = parse_csv_records(buffer.str());
    if (records.empty()) throw DataError("csv: empty file: " + path);

    RawTable table;
    std::size_t first_data = 0;
    const std::size_t width = records[0].size();
    if (has_header) {
        table.column_names = records[0];
        first_data = 1;
    } else {
        table.column_names.resize(width);
        for (std::size_t c = 0; c < width; ++c)
            table.column_names[c] = "c" + std::to_string(c);
    }

    // Uniqueness of names is defined after whitespace trimming.
    {
        std::vector<std::string> trimmed;
        trimmed.reserve(width);
        for (const auto& name : table.column_names) trimmed.push_back(trim(name));
        auto sorted = trimmed;
        std::sort(sorted.begin(), sorted.end());
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        if (dup != sorted.end())
            throw DataError("csv: duplicate column name after trimming: \"" + *dup + "\"");
    }

    const std::size_t nrows = records.size() - first_data;
    for (std::size_t r = first_data; r < records.size(); ++r) {
        if (records[r].size() != width) {
            throw DataError("csv: record " + std::to_string(r + 1) + " has " +
                            std::to_string(records[r].size()) + " fields, expected " +
                            std::to_string(width));
        }
    }

    table.row_count = static_cast<std::int64_t>(nrows);
    table.columns.reserve(width);
    for (std::size_t c = 0; c < width; ++c) {
        bool all_integer = true;
        bool all_numeric = true;
        for (std::size_t r = 0; r < nrows && (all_numeric || all_integer); ++r) {
            const std::string cell = trim(records[first_data + r][c]);
            if (cell.empty()) {
                all_integer = false; // empty marks missing; integer columns have no NaN
                continue;
            }
            std::int64_t iv = 0;
            if (!parse_int64(cell, iv)) all_integer = false;
            if (!parse_numeric_cell(cell).has_value()) {
                all_numeric = false;
                all_integer = false;
            }
        }
        if (all_integer && nrows > 0) {
            IntegerColumn col;
            col.values.resize(nrows, 0);
            col.missing.resize(nrows, false);
            for (std::size_t r = 0; r < nrows; ++r) {
                const std::string cell = trim(records[first_data + r][c]);
                std::int64_t iv = 0;
                parse_int64(cell, iv);
                col.values[r] = iv;
            }
            table.columns.emplace_back(std::move(col));
        } else if (all_numeric && nrows > 0) {
            NumericColumn col;
            col.values.resize(nrows, 0.0);
            for (std::size_t r = 0; r < nrows; ++r)
                col.values[r] = *parse_numeric_cell(records[first_data + r][c]);
            table.columns.emplace_back(std::move(col));
        } else {
            TextColumn col;
            col.values.resize(nrows);
            for (std::size_t r = 0; r < nrows; ++r)
                col.values[r] = trim(records[first_data + r][c]);
            table.columns.emplace_back(std::move(col));
        }
    }
    return table;
}

std::string format_float(float v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace ids
