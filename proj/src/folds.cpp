#include "ids/folds.hpp"

#include <map>
#include <numeric>

#include "ids/errors.hpp"
#include "ids/rng.hpp"

namespace ids {

namespace {

void shuffle(std::vector<std::int64_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace

std::vector<std::int64_t> FoldPlan::test_indices(std::int32_t fold) const {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) out.push_back(static_cast<std::int64_t>(i));
    return out;
}

std::vector<std::int64_t> FoldPlan::train_indices(std::int32_t fold) const {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) out.push_back(static_cast<std::int64_t>(i));
    return out;
}

FoldPlan make_folds(const LabelVector& y, std::int64_t k, bool stratified,
                    std::uint64_t seed) {
    const std::int64_t n = static_cast<std::int64_t>(y.size());
    require(k >= 2, "make_folds: k must be >= 2");
    require(n >= k, "make_folds: k > n");

    FoldPlan plan;
    plan.k = k;
    plan.stratified = stratified;
    plan.seed = seed;
    plan.assignments.assign(static_cast<std::size_t>(n), 0);

    if (!stratified) {
        std::vector<std::int64_t> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        Rng rng = Rng::stream(seed, 0xf01d5u);
        shuffle(order, rng);
        for (std::int64_t i = 0; i < n; ++i)
            plan.assignments[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
                static_cast<std::int32_t>(i % k);
        return plan;
    }

    // Classes processed in code order; each class is shuffled with its own
    // stream and dealt round-robin starting where the previous class ended.
    std::map<std::int32_t, std::vector<std::int64_t>> by_class;
    for (std::int64_t i = 0; i < n; ++i)
        by_class[y[static_cast<std::size_t>(i)]].push_back(i);

    std::int64_t next_fold = 0;
    for (auto& [code, rows] : by_class) {
        Rng rng = Rng::stream(seed, 0xf01d5u, static_cast<std::uint64_t>(code));
        shuffle(rows, rng);
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(rows.size()); ++i) {
            plan.assignments[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])] =
                static_cast<std::int32_t>(next_fold);
            next_fold = (next_fold + 1) % k;
        }
    }
    return plan;
}

} // namespace ids
