#include "ids/forest.hpp"

#include <numeric>

#include "ids/errors.hpp"
#include "ids/parallel.hpp"
#include "ids/rng.hpp"

namespace ids {

namespace {

ForestModel fit_forest(const Matrix& x, const LabelVector& y, std::int64_t n_trees,
                       TreeParams params, std::uint64_t seed, ForestKind kind,
                       bool bootstrap) {
    require(n_trees >= 1, "forest: n_trees must be >= 1");
    require(x.rows() >= 1, "forest: empty data");
    require(x.rows() == static_cast<std::int64_t>(y.size()),
            "forest: X/y length mismatch");

    params.seed = seed;
    if (params.num_classes == 0) params.num_classes = infer_num_classes(y);

    ForestModel model;
    model.kind = kind;
    model.n_trees = n_trees;
    model.params = params;
    model.bootstrap = bootstrap;
    model.seed = seed;
    model.trees.resize(static_cast<std::size_t>(n_trees));

    const std::int64_t n = x.rows();
    parallel_for(n_trees, [&](std::int64_t t) {
        std::vector<std::int64_t> rows;
        if (bootstrap) {
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t),
                                  0xb007u /* bootstrap stream */);
            rows.resize(static_cast<std::size_t>(n));
            for (std::int64_t i = 0; i < n; ++i)
                rows[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(
                    rng.uniform_index(static_cast<std::uint64_t>(n)));
        } else {
            rows.resize(static_cast<std::size_t>(n));
            std::iota(rows.begin(), rows.end(), 0);
        }
        model.trees[static_cast<std::size_t>(t)] =
            dt_fit(x, y, params, static_cast<std::uint64_t>(t), &rows);
    });
    return model;
}

} // namespace

ForestModel rf_fit(const Matrix& x, const LabelVector& y, std::int64_t n_trees,
                   TreeParams params, std::uint64_t seed, bool bootstrap) {
    params.splitter = Splitter::best;
    return fit_forest(x, y, n_trees, params, seed, ForestKind::random_forest, bootstrap);
}

ForestModel et_fit(const Matrix& x, const LabelVector& y, std::int64_t n_trees,
                   TreeParams params, std::uint64_t seed) {
    params.splitter = Splitter::random;
    return fit_forest(x, y, n_trees, params, seed, ForestKind::extra_trees,
                      /*bootstrap=*/false);
}

Matrix forest_predict_proba(const ForestModel& m, const Matrix& x) {
    require(!m.trees.empty(), "forest_predict_proba: empty model");
    require(x.cols() == m.trees[0].num_features,
            "forest_predict_proba: dimension mismatch");
    const std::int32_t C = m.trees[0].num_classes;
    Matrix out(x.rows(), C);
    parallel_for(x.rows(), [&](std::int64_t i) {
        auto row = x.row(i);
        thread_local std::vector<double> acc;
        acc.assign(static_cast<std::size_t>(C), 0.0);
        for (const Tree& t : m.trees) {
            const std::int64_t leaf = t.leaf_for(row);
            auto counts = t.counts_at(t.nodes[static_cast<std::size_t>(leaf)]);
            double total = 0.0;
            for (double c : counts) total += c;
            for (std::int32_t c = 0; c < C; ++c)
                acc[static_cast<std::size_t>(c)] += counts[static_cast<std::size_t>(c)] / total;
        }
        const double k = static_cast<double>(m.trees.size());
        for (std::int32_t c = 0; c < C; ++c)
            out.at(i, c) = static_cast<float>(acc[static_cast<std::size_t>(c)] / k);
    });
    return out;
}

LabelVector forest_predict(const ForestModel& m, const Matrix& x) {
    const Matrix proba = forest_predict_proba(m, x);
    LabelVector out(static_cast<std::size_t>(x.rows()), 0);
    parallel_for(x.rows(), [&](std::int64_t i) {
        std::int32_t best = 0;
        float best_v = proba.at(i, 0);
        for (std::int64_t c = 1; c < proba.cols(); ++c) {
            if (proba.at(i, c) > best_v) {
                best_v = proba.at(i, c);
                best = static_cast<std::int32_t>(c);
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    });
    return out;
}

} // namespace ids
