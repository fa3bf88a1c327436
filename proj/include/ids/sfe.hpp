#pragma once

#include <cstdint>
#include <string>

#include "ids/gmm.hpp"
#include "ids/kmeans.hpp"
#include "ids/matrix.hpp"
#include "ids/transform.hpp"

namespace ids {

enum class EmbedMode { hard, soft, both };

EmbedMode parse_embed_mode(const std::string& s);
std::string to_string(EmbedMode m);

struct SfeConfig {
    std::int64_t k_kmeans = 0; // 0 = use class count
    std::int64_t k_gmm = 0;
    EmbedMode embed_mode = EmbedMode::hard;
    std::uint64_t seed = 0;
    std::int64_t max_iter = 300;
    double tol = 1e-4;
    double cov_floor = 1e-6;
};

// Fitted clusterers plus the z-score parameters of the meta-features over
// the fitting data; embedding standardizes meta columns with these before
// concatenation so train and inference agree.
struct SfeModel {
    KMeansModel kmeans;
    GmmModel gmm;
    EmbedMode embed_mode = EmbedMode::hard;
    ScalerParams meta_scaler;

    std::int64_t meta_width() const;
    std::int64_t output_width(std::int64_t d_in) const { return d_in + meta_width(); }
};

SfeModel sfe_fit(const Matrix& x, const SfeConfig& cfg);

// X horizontally concatenated with standardized meta-features.
//   hard: k-means label column + GMM argmax column (2 columns)
//   soft: k_kmeans negated-distance columns + k_gmm responsibility columns
//   both: hard columns then soft columns
// Original columns are preserved verbatim in positions 0..d-1.
Matrix sfe_embed(const SfeModel& m, const Matrix& x);

// Raw (un-standardized) meta-features; exposed for fitting and tests.
Matrix sfe_meta_features(const KMeansModel& km, const GmmModel& gm,
                         EmbedMode mode, const Matrix& x);

} // namespace ids
