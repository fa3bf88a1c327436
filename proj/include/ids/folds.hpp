#pragma once

#include <cstdint>
#include <vector>

#include "ids/matrix.hpp"

namespace ids {

struct FoldPlan {
    std::int64_t k = 0;
    std::vector<std::int32_t> assignments; // fold index per row
    bool stratified = true;
    std::uint64_t seed = 0;

    std::vector<std::int64_t> test_indices(std::int32_t fold) const;
    std::vector<std::int64_t> train_indices(std::int32_t fold) const;
};

// Seeded shuffled assignment. Plain folds round-robin a global shuffle;
// stratified folds round-robin each class after a per-class shuffle,
// carrying the fold offset across classes so overall fold sizes still
// differ by at most one.
FoldPlan make_folds(const LabelVector& y, std::int64_t k, bool stratified,
                    std::uint64_t seed);

} // namespace ids
