#pragma once

#include <cstdint>
#include <vector>

#include "ids/matrix.hpp"

namespace ids {

// Regression tree with real-valued leaf weights (one boosting stage).
struct RegNode {
    std::int32_t feature = -1; // -1 = leaf
    float threshold = 0.0f;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0; // leaf weight w* = -G / (H + lambda)

    bool is_leaf() const { return feature < 0; }
};

struct RegTree {
    std::vector<RegNode> nodes;
    double predict(std::span<const float> row) const;
};

enum class GbtObjective { binary_logistic, softmax };

struct GbtParams {
    std::int64_t n_rounds = 100;
    double learning_rate = 0.3;
    double gamma = 0.0;  // per-leaf split penalty
    double lambda = 1.0; // L2 on leaf weights
    std::int64_t max_depth = 6;
    std::uint64_t seed = 0;
    std::int32_t num_classes = 0; // 0 = infer
};

struct GbtModel {
    // tree_groups[round][class]; binary_logistic has one tree per round.
    std::vector<std::vector<RegTree>> tree_groups;
    GbtObjective objective = GbtObjective::binary_logistic;
    GbtParams params;
    std::vector<double> base_scores;      // per-class initial margins
    std::vector<double> train_loss_trace; // mean training loss per round
    std::int32_t num_classes = 0;
    std::int64_t num_features = 0;
};

// Leaf weight and split gain derived from the second-order expansion of the
// regularized objective; exposed for direct verification.
double gbt_leaf_weight(double g_sum, double h_sum, double lambda);
double gbt_split_gain(double g_left, double h_left, double g_right, double h_right,
                      double lambda, double gamma);

// Newton boosting: per round (and per class under softmax) grow one
// regression tree on the loss gradients/Hessians at the current margins,
// keeping only splits with positive structure-score gain, then advance the
// margins by learning_rate times the tree output.
GbtModel gbt_fit(const Matrix& x, const LabelVector& y, const GbtParams& params);

Matrix gbt_predict_proba(const GbtModel& m, const Matrix& x);
LabelVector gbt_predict(const GbtModel& m, const Matrix& x);

// Raw margin matrix (n x C); binary models report the single logit in
// column 1 and zero in column 0 (softmax over the pair equals the sigmoid).
Matrix gbt_margins(const GbtModel& m, const Matrix& x);

} // namespace ids
