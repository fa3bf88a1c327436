#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ids/csv.hpp"
#include "ids/matrix.hpp"
#include "ids/profile.hpp"

namespace ids {

struct CleaningStats {
    std::int64_t rows_in = 0;
    std::int64_t rows_dropped_nan_inf = 0;
    std::int64_t rows_dropped_duplicate = 0;
    std::map<std::string, std::string> classes_merged; // raw -> merged, as applied
    std::vector<std::string> dropped_columns;
};

// Cleaned tabular data: finite 32-bit features, de-duplicated rows, merged
// label names. Column order from the source file is preserved; label_index
// points at the label's position among column_names.
struct CleanTable {
    std::vector<std::string> column_names; // trimmed, original order (features + label)
    std::size_t label_index = 0;
    Matrix features;                      // n x d, d = column_names.size() - 1
    std::vector<std::string> label_column;
    CleaningStats provenance;

    std::vector<std::string> feature_names() const {
        std::vector<std::string> out;
        out.reserve(column_names.size() - 1);
        for (std::size_t i = 0; i < column_names.size(); ++i)
            if (i != label_index) out.push_back(column_names[i]);
        return out;
    }
};

// Applies the Step-1 cleaning rules: trim column names, drop rows with
// missing/NaN/inf values, downcast numeric storage to 32 bits, merge label
// classes via the profile, drop exact-duplicate rows keeping the first
// occurrence. Non-numeric feature columns (excluding dropped ones) abort
// with the offending column list.
CleanTable clean(const RawTable& raw, const DatasetProfile& profile);

// Feature matrix + raw label list, label column excluded, order preserved.
std::pair<Matrix, std::vector<std::string>> split_xy(const CleanTable& table);

// Class counts sorted by descending count, ties lexicographic.
std::vector<std::pair<std::string, std::int64_t>>
class_histogram(const std::vector<std::string>& labels);

// Writes a CleanTable back to benchmark-format CSV (used by `prep`).
void write_clean_csv(const CleanTable& table, const std::string& path);

} // namespace ids
