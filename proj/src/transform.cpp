#include "ids/transform.hpp"

#include <algorithm>
#include <cmath>

#include "ids/errors.hpp"
#include "ids/ingest.hpp"
#include "ids/parallel.hpp"

namespace ids {

ScalerParams fit_scaler(const Matrix& x) {
    require(x.rows() >= 1, "fit_scaler: empty matrix");
    const std::int64_t n = x.rows();
    const std::int64_t d = x.cols();

    // Column sums accumulated per fixed-size row chunk, combined in chunk
    // order, so results are identical at every thread count.
    using Acc = std::vector<double>;
    Acc zero(static_cast<std::size_t>(d), 0.0);
    auto add = [](Acc a, const Acc& b) {
        for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
        return a;
    };

    Acc sums = chunked_reduce<Acc>(
        n, zero,
        [&](std::int64_t begin, std::int64_t end) {
            Acc s(static_cast<std::size_t>(d), 0.0);
            for (std::int64_t i = begin; i < end; ++i) {
                auto row = x.row(i);
                for (std::int64_t j = 0; j < d; ++j)
                    s[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)];
            }
            return s;
        },
        add);

    ScalerParams p;
    p.means.resize(static_cast<std::size_t>(d));
    for (std::int64_t j = 0; j < d; ++j)
        p.means[static_cast<std::size_t>(j)] = sums[static_cast<std::size_t>(j)] / static_cast<double>(n);

    Acc sq = chunked_reduce<Acc>(
        n, zero,
        [&](std::int64_t begin, std::int64_t end) {
            Acc s(static_cast<std::size_t>(d), 0.0);
            for (std::int64_t i = begin; i < end; ++i) {
                auto row = x.row(i);
                for (std::int64_t j = 0; j < d; ++j) {
                    const double diff = row[static_cast<std::size_t>(j)] - p.means[static_cast<std::size_t>(j)];
                    s[static_cast<std::size_t>(j)] += diff * diff;
                }
            }
            return s;
        },
        add);

    p.stds.resize(static_cast<std::size_t>(d));
    for (std::int64_t j = 0; j < d; ++j) {
        const double var = sq[static_cast<std::size_t>(j)] / static_cast<double>(n);
        p.stds[static_cast<std::size_t>(j)] = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return p;
}

Matrix apply_scaler(const ScalerParams& p, const Matrix& x) {
    require(x.cols() == p.dims(), "apply_scaler: dimension mismatch");
    const std::int64_t d = x.cols();
    Matrix out(x.rows(), d);
    parallel_for(x.rows(), [&](std::int64_t i) {
        auto src = x.row(i);
        auto dst = out.row(i);
        for (std::int64_t j = 0; j < d; ++j) {
            const std::size_t js = static_cast<std::size_t>(j);
            const double sd = p.stds[js];
            dst[js] = sd == 0.0
                          ? 0.0f
                          : static_cast<float>((src[js] - p.means[js]) / sd);
        }
    });
    return out;
}

LabelMap fit_label_encoder(const std::vector<std::string>& labels) {
    require(!labels.empty(), "fit_label_encoder: empty label list");
    const auto hist = class_histogram(labels); // already frequency-desc, lex ties
    LabelMap m;
    m.code_to_class.reserve(hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i) {
        m.class_to_code[hist[i].first] = static_cast<std::int32_t>(i);
        m.code_to_class.push_back(hist[i].first);
    }
    return m;
}

LabelVector encode_labels(const LabelMap& m, const std::vector<std::string>& labels) {
    LabelVector out;
    out.reserve(labels.size());
    for (const auto& l : labels) {
        auto it = m.class_to_code.find(l);
        if (it == m.class_to_code.end())
            throw DataError("encode_labels: unseen label \"" + l + "\"");
        out.push_back(it->second);
    }
    return out;
}

std::vector<std::string> decode_labels(const LabelMap& m, const LabelVector& codes) {
    std::vector<std::string> out;
    out.reserve(codes.size());
    for (std::int32_t c : codes) {
        require(c >= 0 && c < m.num_classes(),
                "decode_labels: code out of range: " + std::to_string(c));
        out.push_back(m.code_to_class[static_cast<std::size_t>(c)]);
    }
    return out;
}

} // namespace ids
