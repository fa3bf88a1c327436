#pragma once

#include <cstdint>
#include <vector>

#include "ids/matrix.hpp"

namespace ids {

// counts[actual][predicted]
struct ConfusionMatrix {
    std::vector<std::int64_t> counts; // C x C row-major
    std::int32_t num_classes = 0;

    std::int64_t& at(std::int32_t actual, std::int32_t predicted) {
        return counts[static_cast<std::size_t>(actual) * num_classes + predicted];
    }
    std::int64_t at(std::int32_t actual, std::int32_t predicted) const {
        return counts[static_cast<std::size_t>(actual) * num_classes + predicted];
    }
    std::int64_t total() const;
    std::int64_t trace() const;
    void add(const ConfusionMatrix& other);
};

ConfusionMatrix confusion_matrix(const LabelVector& y_true, const LabelVector& y_pred,
                                 std::int32_t num_classes);

double accuracy(const ConfusionMatrix& cm);

enum class Averaging { macro, weighted, micro };

struct PrfResult {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Classes whose precision or recall had a zero denominator (defined as 0).
    std::vector<std::int32_t> zero_division_classes;
};

// One-vs-rest per-class precision/recall/F1 combined per averaging mode.
// macro averages over classes present in y_true (row sum > 0); weighted
// weighs by support; micro pools the one-vs-rest counts.
PrfResult precision_recall_f1(const ConfusionMatrix& cm, Averaging averaging);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

// Points at every distinct score threshold (descending), starting (0,0) and
// ending (1,1); tied scores advance jointly.
std::vector<RocPoint> roc_curve(const std::vector<std::int8_t>& y_true_binary,
                                const std::vector<double>& scores);

// Trapezoid area under roc_curve.
double auc(const std::vector<std::int8_t>& y_true_binary,
           const std::vector<double>& scores);

struct MulticlassAuc {
    std::vector<double> per_class; // NaN for classes absent from y_true
    double macro = 0.0;            // unweighted mean over present classes
};

MulticlassAuc multiclass_auc(const LabelVector& y_true, const Matrix& proba);

} // namespace ids
