#include "ids/resample.hpp"

#include <algorithm>

#include "ids/errors.hpp"
#include "ids/rng.hpp"

namespace ids {

ResampleResult random_oversample(const Matrix& x, const LabelVector& y,
                                 std::uint64_t seed) {
    require(x.rows() >= 1, "random_oversample: empty input");
    require(x.rows() == static_cast<std::int64_t>(y.size()),
            "random_oversample: X/y length mismatch");

    const std::int64_t n = x.rows();
    std::map<std::int32_t, std::vector<std::int64_t>> by_class;
    for (std::int64_t i = 0; i < n; ++i) by_class[y[static_cast<std::size_t>(i)]].push_back(i);

    std::int64_t majority = 0;
    for (const auto& [code, rows] : by_class)
        majority = std::max(majority, static_cast<std::int64_t>(rows.size()));

    ResampleResult result;
    result.x = x;
    result.y = y;
    result.plan.seed = seed;

    for (const auto& [code, rows] : by_class) {
        result.plan.per_class_target[code] = majority;
        const std::int64_t deficit = majority - static_cast<std::int64_t>(rows.size());
        if (deficit == 0) continue;
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(code));
        for (std::int64_t k = 0; k < deficit; ++k) {
            const std::int64_t src =
                rows[rng.uniform_index(rows.size())];
            result.x.push_row(x.row(src));
            result.y.push_back(code);
            result.plan.source_indices.push_back(src);
        }
    }
    return result;
}

} // namespace ids
