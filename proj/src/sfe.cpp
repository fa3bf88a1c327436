#include "ids/sfe.hpp"

#include "ids/errors.hpp"
#include "ids/rng.hpp"

namespace ids {

EmbedMode parse_embed_mode(const std::string& s) {
    if (s == "hard") return EmbedMode::hard;
    if (s == "soft") return EmbedMode::soft;
    if (s == "both") return EmbedMode::both;
    throw ConfigError("sfe: unknown embed_mode \"" + s + "\" (hard|soft|both)");
}

std::string to_string(EmbedMode m) {
    switch (m) {
        case EmbedMode::hard: return "hard";
        case EmbedMode::soft: return "soft";
        case EmbedMode::both: return "both";
    }
    return "?";
}

std::int64_t SfeModel::meta_width() const {
    switch (embed_mode) {
        case EmbedMode::hard: return 2;
        case EmbedMode::soft: return kmeans.k + gmm.k;
        case EmbedMode::both: return 2 + kmeans.k + gmm.k;
    }
    return 0;
}

Matrix sfe_meta_features(const KMeansModel& km, const GmmModel& gm,
                         EmbedMode mode, const Matrix& x) {
    const bool hard = mode == EmbedMode::hard || mode == EmbedMode::both;
    const bool soft = mode == EmbedMode::soft || mode == EmbedMode::both;

    const std::int64_t width = (hard ? 2 : 0) + (soft ? km.k + gm.k : 0);
    Matrix meta(x.rows(), width);

    KMeansAssignment ka = kmeans_assign(km, x);
    std::vector<std::int32_t> gmm_labels;
    Matrix resp;
    if (hard) gmm_labels = gmm_assign(gm, x);
    if (soft) resp = gmm_responsibilities(gm, x);

    for (std::int64_t i = 0; i < x.rows(); ++i) {
        std::int64_t c = 0;
        if (hard) {
            meta.at(i, c++) = static_cast<float>(ka.labels[static_cast<std::size_t>(i)]);
            meta.at(i, c++) = static_cast<float>(gmm_labels[static_cast<std::size_t>(i)]);
        }
        if (soft) {
            // Negated distance keeps "larger = closer", matching the
            // responsibility columns' orientation.
            for (std::int64_t j = 0; j < km.k; ++j)
                meta.at(i, c++) = -ka.distances.at(i, j);
            for (std::int64_t j = 0; j < gm.k; ++j)
                meta.at(i, c++) = resp.at(i, j);
        }
    }
    return meta;
}

SfeModel sfe_fit(const Matrix& x, const SfeConfig& cfg) {
    require(cfg.k_kmeans >= 1 && cfg.k_gmm >= 1, "sfe_fit: cluster counts must be >= 1");
    SfeModel m;
    m.embed_mode = cfg.embed_mode;
    m.kmeans = kmeans_fit(x, cfg.k_kmeans, cfg.seed, cfg.max_iter, cfg.tol);
    // The GMM runs its own k-means init internally; give it a distinct stream.
    m.gmm = gmm_fit(x, cfg.k_gmm, Rng::stream(cfg.seed, 0x676d6du /* "gmm" */).next_u64(),
                    cfg.max_iter, cfg.tol, cfg.cov_floor);
    const Matrix meta = sfe_meta_features(m.kmeans, m.gmm, m.embed_mode, x);
    m.meta_scaler = fit_scaler(meta);
    return m;
}

Matrix sfe_embed(const SfeModel& m, const Matrix& x) {
    const Matrix meta = sfe_meta_features(m.kmeans, m.gmm, m.embed_mode, x);
    return Matrix::hconcat(x, apply_scaler(m.meta_scaler, meta));
}

} // namespace ids
