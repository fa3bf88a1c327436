#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ids/matrix.hpp"

namespace ids {

// Per-feature mean and population standard deviation (divide by n).
struct ScalerParams {
    std::vector<double> means;
    std::vector<double> stds;

    std::int64_t dims() const { return static_cast<std::int64_t>(means.size()); }
};

ScalerParams fit_scaler(const Matrix& x);

// out[i][j] = (x[i][j] - mean[j]) / std[j]; columns with std == 0 map to 0.
Matrix apply_scaler(const ScalerParams& p, const Matrix& x);

// Class-name <-> code bijection. Codes are assigned 0..C-1 by descending
// training frequency, ties broken lexicographically.
struct LabelMap {
    std::map<std::string, std::int32_t> class_to_code;
    std::vector<std::string> code_to_class;

    std::int32_t num_classes() const {
        return static_cast<std::int32_t>(code_to_class.size());
    }
};

LabelMap fit_label_encoder(const std::vector<std::string>& labels);

// Unseen labels are a hard error naming the label.
LabelVector encode_labels(const LabelMap& m, const std::vector<std::string>& labels);
std::vector<std::string> decode_labels(const LabelMap& m, const LabelVector& codes);

} // namespace ids
