#pragma once

#include <cstdint>
#include <vector>

#include "ids/tree.hpp"

namespace ids {

enum class ForestKind { random_forest, extra_trees };

struct ForestModel {
    std::vector<Tree> trees;
    ForestKind kind = ForestKind::random_forest;
    std::int64_t n_trees = 0;
    TreeParams params;
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

// Each tree trains on an n-sample bootstrap drawn from a per-tree stream
// keyed by (seed, tree index); splitter is `best`. `bootstrap` exists as a
// test hook to make a 1-tree forest coincide with dt_fit.
ForestModel rf_fit(const Matrix& x, const LabelVector& y, std::int64_t n_trees,
                   TreeParams params, std::uint64_t seed, bool bootstrap = true);

// Every tree sees the entire sample; splits draw random cut-points.
ForestModel et_fit(const Matrix& x, const LabelVector& y, std::int64_t n_trees,
                   TreeParams params, std::uint64_t seed);

// Mean of per-tree leaf probability vectors; predict = argmax (ties ->
// lowest code).
Matrix forest_predict_proba(const ForestModel& m, const Matrix& x);
LabelVector forest_predict(const ForestModel& m, const Matrix& x);

} // namespace ids
