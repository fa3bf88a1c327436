#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ids/matrix.hpp"

namespace ids {

// Audit record: for each appended row, the original row it copies.
struct ResamplePlan {
    std::uint64_t seed = 0;
    std::map<std::int32_t, std::int64_t> per_class_target;
    std::vector<std::int64_t> source_indices;
};

struct ResampleResult {
    Matrix x;
    LabelVector y;
    ResamplePlan plan;
};

// Duplicates minority-class rows uniformly at random (with replacement)
// until every class count equals the majority count. Rows 0..n-1 of the
// output are the input, order unchanged; appended copies follow grouped by
// class code, each class drawn from its own counter-based stream keyed by
// (seed, class code).
ResampleResult random_oversample(const Matrix& x, const LabelVector& y,
                                 std::uint64_t seed);

} // namespace ids
