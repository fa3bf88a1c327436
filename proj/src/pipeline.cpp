#include "ids/pipeline.hpp"

#include <algorithm>

#include "ids/errors.hpp"
#include "ids/log.hpp"
#include "ids/rng.hpp"

namespace ids {

std::int64_t TransformChain::output_width() const {
    std::int64_t w = scaler.dims();
    if (sfe) w += sfe->meta_width();
    if (pca) w = pca->k_out;
    return w;
}

std::uint64_t content_fingerprint(const Matrix& x, const LabelVector& y) {
    // FNV-1a over the 32-bit feature pattern and the label codes.
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix_bytes = [&h](const void* data, std::size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ull;
        }
    };
    const std::int64_t dims[2] = {x.rows(), x.cols()};
    mix_bytes(dims, sizeof(dims));
    mix_bytes(x.data().data(), x.data().size() * sizeof(float));
    mix_bytes(y.data(), y.size() * sizeof(std::int32_t));
    return h;
}

FitChainResult fit_chain(const Matrix& x, const LabelVector& y,
                         const TransformSettings& settings, std::uint64_t seed,
                         std::int32_t num_classes,
                         std::vector<std::string> feature_names) {
    require(x.rows() >= 2, "fit_chain: need at least 2 rows");
    require(x.rows() == static_cast<std::int64_t>(y.size()),
            "fit_chain: X/y length mismatch");

    FitChainResult out;
    out.chain.settings = settings;
    out.chain.train_rows = x.rows();
    out.chain.feature_names = std::move(feature_names);
    out.chain.content_hash = content_fingerprint(x, y);

    out.chain.scaler = fit_scaler(x);
    Matrix current = apply_scaler(out.chain.scaler, x);
    out.y = y;

    if (settings.oversample) {
        ResampleResult rr = random_oversample(current, out.y, Rng::stream(seed, 0x0f5u).next_u64());
        current = std::move(rr.x);
        out.y = std::move(rr.y);
        out.resample_plan = std::move(rr.plan);
    }

    if (settings.sfe) {
        SfeConfig cfg = settings.sfe_cfg;
        if (cfg.k_kmeans <= 0) cfg.k_kmeans = num_classes;
        if (cfg.k_gmm <= 0) cfg.k_gmm = num_classes;
        cfg.seed = Rng::stream(seed, 0x5feu).next_u64();
        out.chain.sfe = sfe_fit(current, cfg);
        current = sfe_embed(*out.chain.sfe, current);
    }

    if (settings.pca) {
        const std::int64_t k = std::min<std::int64_t>(settings.pca_k, current.cols());
        if (k != settings.pca_k)
            log::warn("pca: k clamped to feature width " + std::to_string(k));
        out.chain.pca = pca_fit(current, k);
        current = pca_transform(*out.chain.pca, current);
    }

    out.x = std::move(current);
    return out;
}

Matrix apply_chain(const TransformChain& chain, const Matrix& x) {
    require(x.cols() == chain.input_width(), "apply_chain: dimension mismatch");
    Matrix current = apply_scaler(chain.scaler, x);
    if (chain.sfe) current = sfe_embed(*chain.sfe, current);
    if (chain.pca) current = pca_transform(*chain.pca, current);
    return current;
}

ModelKind parse_model_kind(const std::string& s) {
    if (s == "dt") return ModelKind::dt;
    if (s == "rf") return ModelKind::rf;
    if (s == "et") return ModelKind::et;
    if (s == "gbt" || s == "xgb") return ModelKind::gbt;
    throw ConfigError("unknown model kind \"" + s + "\" (dt|rf|et|gbt)");
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::dt: return "dt";
        case ModelKind::rf: return "rf";
        case ModelKind::et: return "et";
        case ModelKind::gbt: return "gbt";
    }
    return "?";
}

ModelSpec ModelSpec::defaults(ModelKind kind) {
    ModelSpec spec;
    spec.kind = kind;
    switch (kind) {
        case ModelKind::dt:
            spec.tree.max_features = MaxFeatures::all();
            break;
        case ModelKind::rf:
        case ModelKind::et:
            spec.tree.max_features = MaxFeatures::sqrt();
            spec.n_trees = 100;
            break;
        case ModelKind::gbt:
            break; // GbtParams defaults match the spec'd settings
    }
    return spec;
}

std::int64_t TrainedModel::num_features() const {
    switch (kind) {
        case ModelKind::dt: return tree->num_features;
        case ModelKind::rf:
        case ModelKind::et: return forest->trees.at(0).num_features;
        case ModelKind::gbt: return gbt->num_features;
    }
    return 0;
}

TrainedModel train_model(const ModelSpec& spec, const Matrix& x, const LabelVector& y,
                         const LabelMap& labels, std::uint64_t seed) {
    TrainedModel m;
    m.kind = spec.kind;
    m.labels = labels;
    const std::int32_t C = labels.num_classes();
    switch (spec.kind) {
        case ModelKind::dt: {
            TreeParams p = spec.tree;
            p.seed = seed;
            p.num_classes = C;
            m.tree = dt_fit(x, y, p);
            break;
        }
        case ModelKind::rf: {
            TreeParams p = spec.tree;
            p.num_classes = C;
            m.forest = rf_fit(x, y, spec.n_trees, p, seed);
            break;
        }
        case ModelKind::et: {
            TreeParams p = spec.tree;
            p.num_classes = C;
            m.forest = et_fit(x, y, spec.n_trees, p, seed);
            break;
        }
        case ModelKind::gbt: {
            GbtParams p = spec.gbt;
            p.seed = seed;
            p.num_classes = C;
            m.gbt = gbt_fit(x, y, p);
            break;
        }
    }
    return m;
}

Matrix model_predict_proba(const TrainedModel& m, const Matrix& x) {
    switch (m.kind) {
        case ModelKind::dt: return tree_predict_proba(*m.tree, x);
        case ModelKind::rf:
        case ModelKind::et: return forest_predict_proba(*m.forest, x);
        case ModelKind::gbt: return gbt_predict_proba(*m.gbt, x);
    }
    throw InternalError("model_predict_proba: bad kind");
}

LabelVector model_predict(const TrainedModel& m, const Matrix& x) {
    const Matrix proba = model_predict_proba(m, x);
    LabelVector out(static_cast<std::size_t>(proba.rows()), 0);
    for (std::int64_t i = 0; i < proba.rows(); ++i) {
        std::int32_t best = 0;
        float best_v = proba.at(i, 0);
        for (std::int64_t c = 1; c < proba.cols(); ++c) {
            if (proba.at(i, c) > best_v) {
                best_v = proba.at(i, c);
                best = static_cast<std::int32_t>(c);
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

} // namespace ids
