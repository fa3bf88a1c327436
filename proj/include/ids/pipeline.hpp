#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ids/forest.hpp"
#include "ids/gbt.hpp"
#include "ids/matrix.hpp"
#include "ids/pca.hpp"
#include "ids/resample.hpp"
#include "ids/sfe.hpp"
#include "ids/transform.hpp"
#include "ids/tree.hpp"

namespace ids {

struct TransformSettings {
    bool oversample = true;
    bool sfe = true;
    SfeConfig sfe_cfg; // k_kmeans/k_gmm 0 = class count
    bool pca = true;
    std::int64_t pca_k = 10;
};

// Scaler -> optional clusterer embedding -> optional PCA, frozen after fit.
// Oversampling is not part of the chain (it only rewrites training rows);
// its plan is recorded in the run report instead.
struct TransformChain {
    ScalerParams scaler;
    std::optional<SfeModel> sfe;
    std::optional<PcaModel> pca;
    TransformSettings settings;

    // Fingerprint of the fitting data.
    std::int64_t train_rows = 0;
    std::vector<std::string> feature_names;
    std::string target_column; // ignored when present in prediction inputs
    std::uint64_t content_hash = 0;

    std::int64_t input_width() const { return scaler.dims(); }
    std::int64_t output_width() const;
};

struct FitChainResult {
    TransformChain chain;
    Matrix x; // transformed training matrix (post-oversampling when enabled)
    LabelVector y;
    std::optional<ResamplePlan> resample_plan;
};

std::uint64_t content_fingerprint(const Matrix& x, const LabelVector& y);

FitChainResult fit_chain(const Matrix& x, const LabelVector& y,
                         const TransformSettings& settings, std::uint64_t seed,
                         std::int32_t num_classes,
                         std::vector<std::string> feature_names = {});

// Applies the fitted stages to new rows (no oversampling).
Matrix apply_chain(const TransformChain& chain, const Matrix& x);

enum class ModelKind { dt, rf, et, gbt };

ModelKind parse_model_kind(const std::string& s);
std::string to_string(ModelKind k);

struct ModelSpec {
    ModelKind kind = ModelKind::rf;
    TreeParams tree;         // dt/rf/et settings
    std::int64_t n_trees = 100;
    GbtParams gbt;

    static ModelSpec defaults(ModelKind kind);
};

struct TrainedModel {
    ModelKind kind = ModelKind::rf;
    std::optional<Tree> tree;
    std::optional<ForestModel> forest;
    std::optional<GbtModel> gbt;
    LabelMap labels;

    std::int32_t num_classes() const { return labels.num_classes(); }
    std::int64_t num_features() const;
};

TrainedModel train_model(const ModelSpec& spec, const Matrix& x, const LabelVector& y,
                         const LabelMap& labels, std::uint64_t seed);

Matrix model_predict_proba(const TrainedModel& m, const Matrix& x);
LabelVector model_predict(const TrainedModel& m, const Matrix& x);

} // namespace ids
