#include "ids/reference.hpp"

#include <cmath>
#include <limits>

#include "ids/errors.hpp"

namespace ids::reference {

std::vector<std::int32_t> kmeans_assign_labels(const KMeansModel& m, const Matrix& x) {
    require(x.cols() == m.dims, "reference kmeans_assign: dimension mismatch");
    std::vector<std::int32_t> labels(static_cast<std::size_t>(x.rows()), 0);
    for (std::int64_t i = 0; i < x.rows(); ++i) {
        auto row = x.row(i);
        std::int32_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::int64_t c = 0; c < m.k; ++c) {
            const double dist = sq_distance(row, m.centroid(c));
            if (dist < best_d) {
                best_d = dist;
                best = static_cast<std::int32_t>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
    }
    return labels;
}

Matrix gmm_responsibilities(const GmmModel& m, const Matrix& x) {
    require(x.cols() == m.dims, "reference gmm_responsibilities: dimension mismatch");
    Matrix out(x.rows(), m.k);
    constexpr double kLog2Pi = 1.8378770664093454836;
    std::vector<double> lj(static_cast<std::size_t>(m.k));
    for (std::int64_t i = 0; i < x.rows(); ++i) {
        auto row = x.row(i);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::int64_t c = 0; c < m.k; ++c) {
            auto mean = m.mean(c);
            auto var = m.variance(c);
            double s = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double diff = static_cast<double>(row[j]) - mean[j];
                s += std::log(var[j]) + diff * diff / var[j];
            }
            const double w = m.weights[static_cast<std::size_t>(c)];
            lj[static_cast<std::size_t>(c)] =
                (w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity()) -
                0.5 * (s + static_cast<double>(row.size()) * kLog2Pi);
            mx = std::max(mx, lj[static_cast<std::size_t>(c)]);
        }
        double sum = 0.0;
        for (std::int64_t c = 0; c < m.k; ++c)
            sum += std::exp(lj[static_cast<std::size_t>(c)] - mx);
        const double lse = mx + std::log(sum);
        for (std::int64_t c = 0; c < m.k; ++c)
            out.at(i, c) = static_cast<float>(std::exp(lj[static_cast<std::size_t>(c)] - lse));
    }
    return out;
}

Matrix apply_scaler(const ScalerParams& p, const Matrix& x) {
    require(x.cols() == p.dims(), "reference apply_scaler: dimension mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::int64_t i = 0; i < x.rows(); ++i) {
        auto src = x.row(i);
        auto dst = out.row(i);
        for (std::int64_t j = 0; j < x.cols(); ++j) {
            const std::size_t js = static_cast<std::size_t>(j);
            const double sd = p.stds[js];
            dst[js] = sd == 0.0 ? 0.0f
                                : static_cast<float>((src[js] - p.means[js]) / sd);
        }
    }
    return out;
}

Moments column_moments(const Matrix& x) {
    const std::int64_t n = x.rows();
    const std::int64_t d = x.cols();
    Moments m;
    m.mean.assign(static_cast<std::size_t>(d), 0.0);
    m.variance.assign(static_cast<std::size_t>(d), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        auto row = x.row(i);
        for (std::int64_t j = 0; j < d; ++j)
            m.mean[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)];
    }
    for (auto& v : m.mean) v /= static_cast<double>(n);
    for (std::int64_t i = 0; i < n; ++i) {
        auto row = x.row(i);
        for (std::int64_t j = 0; j < d; ++j) {
            const double diff = row[static_cast<std::size_t>(j)] - m.mean[static_cast<std::size_t>(j)];
            m.variance[static_cast<std::size_t>(j)] += diff * diff;
        }
    }
    for (auto& v : m.variance) v /= static_cast<double>(n);
    return m;
}

std::vector<double> covariance_unit_scaled(const Matrix& x,
                                           const std::vector<double>& mean,
                                           const std::vector<double>& scale) {
    const std::int64_t n = x.rows();
    const std::int64_t d = x.cols();
    std::vector<double> cov(static_cast<std::size_t>(d * d), 0.0);
    std::vector<double> z(static_cast<std::size_t>(d), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        auto row = x.row(i);
        for (std::int64_t j = 0; j < d; ++j)
            z[static_cast<std::size_t>(j)] =
                (row[static_cast<std::size_t>(j)] - mean[static_cast<std::size_t>(j)]) /
                scale[static_cast<std::size_t>(j)];
        for (std::int64_t r = 0; r < d; ++r)
            for (std::int64_t c = 0; c < d; ++c)
                cov[static_cast<std::size_t>(r * d + c)] +=
                    z[static_cast<std::size_t>(r)] * z[static_cast<std::size_t>(c)];
    }
    for (auto& v : cov) v /= static_cast<double>(n);
    return cov;
}

Matrix forest_predict_proba(const ForestModel& m, const Matrix& x) {
    require(!m.trees.empty(), "reference forest_predict_proba: empty model");
    const std::int32_t C = m.trees[0].num_classes;
    Matrix out(x.rows(), C);
    std::vector<double> acc(static_cast<std::size_t>(C), 0.0);
    for (std::int64_t i = 0; i < x.rows(); ++i) {
        auto row = x.row(i);
        acc.assign(static_cast<std::size_t>(C), 0.0);
        for (const Tree& t : m.trees) {
            const std::int64_t leaf = t.leaf_for(row);
            auto counts = t.counts_at(t.nodes[static_cast<std::size_t>(leaf)]);
            double total = 0.0;
            for (double c : counts) total += c;
            for (std::int32_t c = 0; c < C; ++c)
                acc[static_cast<std::size_t>(c)] += counts[static_cast<std::size_t>(c)] / total;
        }
        for (std::int32_t c = 0; c < C; ++c)
            out.at(i, c) =
                static_cast<float>(acc[static_cast<std::size_t>(c)] / static_cast<double>(m.trees.size()));
    }
    return out;
}

} // namespace ids::reference
