#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ids/folds.hpp"
#include "ids/metrics.hpp"
#include "ids/pipeline.hpp"

namespace ids {

enum class LeakageMode {
    faithful, // transforms (scaler, oversampling, embedding, PCA) fit once on
              // the full dataset before the fold loop
    strict    // everything fit per fold on training rows only; test rows are
              // never oversampled
};

LeakageMode parse_leakage_mode(const std::string& s);
std::string to_string(LeakageMode m);

struct CvSettings {
    std::int64_t k = 10;
    bool stratified = true;
    std::uint64_t seed = 0;
    bool stable_timings = false; // write timings as 0 for byte-reproducible reports
};

struct FoldMetrics {
    std::int32_t fold = 0;
    std::int64_t train_rows = 0;
    std::int64_t test_rows = 0;
    double accuracy = 0.0;
    PrfResult macro, weighted, micro;
    double auc_value = 0.0; // binary: positive class; multiclass: macro one-vs-rest
    double fit_ms = 0.0;
    double predict_ms = 0.0;
};

struct ResamplePlanSummary {
    std::uint64_t seed = 0;
    std::int64_t appended_rows = 0;
    std::int64_t per_class_target = 0;
};

struct ModelEvaluation {
    std::string model_name;
    std::vector<FoldMetrics> folds;
    ConfusionMatrix cm_total; // summed over folds
    double accuracy = 0.0;    // trace / total of cm_total
    PrfResult macro, weighted, micro;
    // Pooled out-of-fold scores: every row is predicted exactly once.
    std::vector<RocPoint> roc_binary;               // C == 2
    double auc_binary = 0.0;
    std::vector<std::vector<RocPoint>> roc_per_class; // C > 2
    MulticlassAuc mc_auc;
    double fit_ms_total = 0.0;
    double predict_ms_total = 0.0;
};

struct EvaluationReport {
    std::string dataset_name;
    std::uint64_t seed = 0;
    LeakageMode leakage_mode = LeakageMode::faithful;
    TransformSettings transforms;
    CvSettings cv;
    LabelMap labels;
    std::int64_t input_rows = 0;
    std::int64_t evaluated_rows = 0; // post-oversampling row count in faithful mode
    std::int64_t input_width = 0;
    std::int64_t transformed_width = 0;
    double reduction_ratio_value = 0.0; // 0 when PCA is off
    std::vector<double> explained_variance; // faithful mode, PCA on
    std::vector<ResamplePlanSummary> resample_plans; // one (faithful) or per fold (strict)
    std::vector<ModelEvaluation> models;
};

// Runs k-fold cross-validation for each model spec. The fold plan is built
// internally: in faithful mode the folds partition the transformed
// (oversampled) rows, in strict mode the original rows, so the position of
// the plan matches the leakage mode.
EvaluationReport cross_validate(const std::vector<ModelSpec>& models,
                                const Matrix& x, const LabelVector& y,
                                const LabelMap& labels,
                                const TransformSettings& transforms,
                                const CvSettings& cv, LeakageMode mode,
                                std::uint64_t seed);

} // namespace ids
