#include "ids/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <unordered_set>

#include "ids/errors.hpp"
#include "ids/log.hpp"

namespace ids {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string label_from_column(const Column& col, std::int64_t r) {
    if (const auto* t = std::get_if<TextColumn>(&col))
        return t->values[static_cast<std::size_t>(r)];
    if (const auto* i = std::get_if<IntegerColumn>(&col))
        return std::to_string(i->values[static_cast<std::size_t>(r)]);
    const auto& n = std::get<NumericColumn>(col);
    const double v = n.values[static_cast<std::size_t>(r)];
    if (std::isnan(v)) return "";
    return format_double(v);
}

// Byte key over the 32-bit feature pattern plus the label; duplicate rows
// are defined by exact bit equality, so the check is order-independent.
struct RowKeyHash {
    std::size_t operator()(const std::string& s) const {
        return std::hash<std::string>{}(s);
    }
};

} // namespace

CleanTable clean(const RawTable& raw, const DatasetProfile& profile) {
    const std::size_t width = raw.column_names.size();
    std::vector<std::string> trimmed_names(width);
    for (std::size_t c = 0; c < width; ++c) trimmed_names[c] = trim(raw.column_names[c]);

    const std::string target = trim(profile.target_column);
    auto target_it = std::find(trimmed_names.begin(), trimmed_names.end(), target);
    if (target_it == trimmed_names.end())
        throw DataError("clean: target column \"" + target + "\" not found");
    const std::size_t raw_label_idx =
        static_cast<std::size_t>(target_it - trimmed_names.begin());

    std::unordered_set<std::string> drops;
    for (const auto& d : profile.drop_columns) drops.insert(trim(d));
    if (drops.count(target))
        throw ConfigError("clean: target column is listed in drop_columns");

    // Kept columns, original order. Feature columns must be numeric.
    std::vector<std::size_t> kept;
    std::vector<std::string> non_numeric;
    CleaningStats stats;
    for (std::size_t c = 0; c < width; ++c) {
        if (drops.count(trimmed_names[c])) {
            stats.dropped_columns.push_back(trimmed_names[c]);
            continue;
        }
        if (c != raw_label_idx && std::holds_alternative<TextColumn>(raw.columns[c]))
            non_numeric.push_back(trimmed_names[c]);
        kept.push_back(c);
    }
    if (!non_numeric.empty()) {
        std::string msg = "clean: non-numeric feature column(s):";
        for (const auto& n : non_numeric) msg += " \"" + n + "\"";
        throw DataError(msg);
    }
    if (kept.size() < 2)
        throw DataError("clean: need at least one feature column and the label column");

    CleanTable out;
    out.column_names.reserve(kept.size());
    for (std::size_t c : kept) out.column_names.push_back(trimmed_names[c]);
    out.label_index = static_cast<std::size_t>(
        std::find(out.column_names.begin(), out.column_names.end(), target) -
        out.column_names.begin());

    const std::int64_t d = static_cast<std::int64_t>(kept.size()) - 1;
    stats.rows_in = raw.row_count;
    out.features = Matrix(0, d);

    std::vector<float> row_buf(static_cast<std::size_t>(d));
    std::unordered_set<std::string, RowKeyHash> seen;
    seen.reserve(static_cast<std::size_t>(raw.row_count));
    std::string key;

    for (std::int64_t r = 0; r < raw.row_count; ++r) {
        bool bad = false;
        std::size_t fj = 0;
        for (std::size_t c : kept) {
            if (c == raw_label_idx) continue;
            double v;
            if (const auto* num = std::get_if<NumericColumn>(&raw.columns[c])) {
                v = num->values[static_cast<std::size_t>(r)];
            } else {
                const auto& icol = std::get<IntegerColumn>(raw.columns[c]);
                v = icol.missing[static_cast<std::size_t>(r)]
                        ? std::numeric_limits<double>::quiet_NaN()
                        : static_cast<double>(icol.values[static_cast<std::size_t>(r)]);
            }
            const float f = static_cast<float>(v);
            if (!std::isfinite(f)) { // catches NaN/inf inputs and f32 overflow
                bad = true;
                break;
            }
            row_buf[fj++] = f;
        }
        std::string label;
        if (!bad) {
            label = label_from_column(raw.columns[raw_label_idx], r);
            if (label.empty()) bad = true;
        }
        if (bad) {
            ++stats.rows_dropped_nan_inf;
            continue;
        }

        const std::string merged = profile.merged(label);
        if (merged != label) stats.classes_merged[label] = merged;

        key.assign(reinterpret_cast<const char*>(row_buf.data()),
                   row_buf.size() * sizeof(float));
        key.push_back('\x1f');
        key.append(merged);
        if (!seen.insert(key).second) {
            ++stats.rows_dropped_duplicate;
            continue;
        }
        out.features.push_row(row_buf);
        out.label_column.push_back(merged);
    }

    if (out.features.rows() == 0)
        throw DataError("clean: zero rows survive cleaning");

    if (!profile.expected_classes.empty()) {
        std::unordered_set<std::string> expected(profile.expected_classes.begin(),
                                                 profile.expected_classes.end());
        for (const auto& l : out.label_column) {
            if (!expected.count(l))
                throw DataError("clean: unexpected class \"" + l +
                                "\" not in profile expected_classes");
        }
    }

    out.provenance = std::move(stats);
    log::info("clean: kept " + std::to_string(out.features.rows()) + " of " +
              std::to_string(raw.row_count) + " rows (nan/inf " +
              std::to_string(out.provenance.rows_dropped_nan_inf) + ", duplicate " +
              std::to_string(out.provenance.rows_dropped_duplicate) + ")");
    return out;
}

std::pair<Matrix, std::vector<std::string>> split_xy(const CleanTable& table) {
    require(table.features.cols() >= 1, "split_xy: no feature columns");
    return {table.features, table.label_column};
}

std::vector<std::pair<std::string, std::int64_t>>
class_histogram(const std::vector<std::string>& labels) {
    require(!labels.empty(), "class_histogram: empty label list");
    std::map<std::string, std::int64_t> counts;
    for (const auto& l : labels) ++counts[l];
    std::vector<std::pair<std::string, std::int64_t>> out(counts.begin(), counts.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

void write_clean_csv(const CleanTable& table, const std::string& path) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw DataError("write_clean_csv: cannot open " + path);
    for (std::size_t c = 0; c < table.column_names.size(); ++c) {
        if (c) outf << ',';
        outf << csv_escape(table.column_names[c]);
    }
    outf << '\n';
    const std::int64_t d = table.features.cols();
    for (std::int64_t r = 0; r < table.features.rows(); ++r) {
        std::int64_t fj = 0;
        for (std::size_t c = 0; c < table.column_names.size(); ++c) {
            if (c) outf << ',';
            if (c == table.label_index) {
                outf << csv_escape(table.label_column[static_cast<std::size_t>(r)]);
            } else {
                outf << format_float(table.features.at(r, fj));
                ++fj;
            }
        }
        outf << '\n';
        check_invariant(fj == d, "write_clean_csv: column bookkeeping");
    }
    if (!outf) throw DataError("write_clean_csv: write failure: " + path);
}

} // namespace ids
