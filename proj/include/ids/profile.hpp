#pragma once

#include <map>
#include <string>
#include <vector>

namespace ids {

// Per-dataset configuration: which column holds the class label, how raw
// class names are merged, and columns to exclude from the feature set
// (identifiers, alternate label columns, non-numeric protocol fields).
struct DatasetProfile {
    std::string name;
    std::string target_column;
    std::map<std::string, std::string> merge_map; // raw name -> merged name
    std::vector<std::string> expected_classes;    // optional, checked when non-empty
    std::vector<std::string> drop_columns;

    // Merged names map to themselves so applying the map twice is a no-op.
    std::string merged(const std::string& raw) const {
        auto it = merge_map.find(raw);
        return it == merge_map.end() ? raw : it->second;
    }

    static DatasetProfile identity(std::string target) {
        DatasetProfile p;
        p.name = "adhoc";
        p.target_column = std::move(target);
        return p;
    }
};

// Reads a profile from the flat key = value format (see README):
//   name = cic_ids2017
//   target_column = Label
//   drop_columns = Flow ID, Timestamp
//   merge.Web Attack X = Web Attack
DatasetProfile load_profile(const std::string& path);

} // namespace ids
