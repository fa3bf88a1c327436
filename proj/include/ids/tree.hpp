#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ids/matrix.hpp"

namespace ids {

// Split-quality criteria. Counts are class tallies of the node's rows.
double gini(std::span<const double> class_counts);
double entropy(std::span<const double> class_counts);
// parent entropy minus size-weighted child entropy
double info_gain(std::span<const double> parent_counts,
                 const std::vector<std::vector<double>>& children_counts);

enum class Criterion { gini, entropy };
enum class Splitter { best, random };

struct MaxFeatures {
    enum class Kind { all, sqrt, log2, fraction } kind = Kind::all;
    double fraction = 1.0;

    static MaxFeatures all() { return {Kind::all, 1.0}; }
    static MaxFeatures sqrt() { return {Kind::sqrt, 1.0}; }
    static MaxFeatures log2() { return {Kind::log2, 1.0}; }
    static MaxFeatures frac(double f) { return {Kind::fraction, f}; }

    std::int64_t resolve(std::int64_t d) const;
};

struct TreeParams {
    Criterion criterion = Criterion::gini;
    std::optional<std::int64_t> max_depth; // nullopt = unlimited
    std::int64_t min_samples_split = 2;
    std::int64_t min_samples_leaf = 1;
    MaxFeatures max_features = MaxFeatures::all();
    Splitter splitter = Splitter::best;
    std::uint64_t seed = 0;
    std::int32_t num_classes = 0; // 0 = infer as max(y)+1
};

// Flat tree storage; node 0 is the root. feature == -1 marks a leaf whose
// class counts live at counts_offset in leaf_counts (C doubles per leaf).
struct TreeNode {
    std::int32_t feature = -1;
    float threshold = 0.0f;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int64_t counts_offset = -1;

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;
    std::vector<double> leaf_counts;
    std::int32_t num_classes = 0;
    std::int64_t num_features = 0;

    std::span<const double> counts_at(const TreeNode& n) const {
        return {leaf_counts.data() + n.counts_offset,
                static_cast<std::size_t>(num_classes)};
    }
    std::int64_t leaf_for(std::span<const float> row) const;
    std::int64_t depth() const;
};

// Greedy recursive growth. splitter=best evaluates thresholds at midpoints
// between consecutive distinct sorted values of each candidate feature;
// splitter=random draws one uniform threshold in [min, max) per candidate.
// Ties resolve to (lowest feature index, lowest threshold). Growth stops at
// pure nodes, max_depth, min_samples_split, or when no candidate feature
// offers a valid boundary; zero-gain boundaries are still split so
// structures like XOR resolve at depth 2. Candidate features are sampled
// with a counter-based stream keyed by (seed, tree_index, node index), so
// results are schedule-independent.
Tree dt_fit(const Matrix& x, const LabelVector& y, const TreeParams& params,
            std::uint64_t tree_index = 0,
            const std::vector<std::int64_t>* row_subset = nullptr);

LabelVector tree_predict(const Tree& t, const Matrix& x);
Matrix tree_predict_proba(const Tree& t, const Matrix& x);

std::int32_t infer_num_classes(const LabelVector& y);

} // namespace ids
