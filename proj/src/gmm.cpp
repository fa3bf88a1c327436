#include "ids/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ids/errors.hpp"
#include "ids/kmeans.hpp"
#include "ids/parallel.hpp"

namespace ids {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836; // log(2*pi)

// log p(x | component c) for a diagonal Gaussian.
double log_density(std::span<const float> x, std::span<const double> mean,
                   std::span<const double> var) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double diff = static_cast<double>(x[j]) - mean[j];
        s += std::log(var[j]) + diff * diff / var[j];
    }
    return -0.5 * (s + static_cast<double>(x.size()) * kLog2Pi);
}

// Fills log_joint[c] = log w_c + log N(x | c) and returns logsumexp over c.
double row_log_joint(const GmmModel& m, std::span<const float> x, double* log_joint) {
    double max_v = -std::numeric_limits<double>::infinity();
    for (std::int64_t c = 0; c < m.k; ++c) {
        const double w = m.weights[static_cast<std::size_t>(c)];
        log_joint[c] = (w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity()) +
                       log_density(x, m.mean(c), m.variance(c));
        max_v = std::max(max_v, log_joint[c]);
    }
    if (!std::isfinite(max_v)) return -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::int64_t c = 0; c < m.k; ++c) sum += std::exp(log_joint[c] - max_v);
    return max_v + std::log(sum);
}

} // namespace

GmmModel gmm_fit(const Matrix& x, std::int64_t k, std::uint64_t seed,
                 std::int64_t max_iter, double tol, double cov_floor) {
    const std::int64_t n = x.rows();
    const std::int64_t d = x.cols();
    require(k >= 1, "gmm_fit: k must be >= 1");
    require(n >= k, "gmm_fit: k > n");
    require(cov_floor > 0.0, "gmm_fit: cov_floor must be positive");

    GmmModel m;
    m.k = k;
    m.dims = d;
    m.cov_floor = cov_floor;
    m.weights.assign(static_cast<std::size_t>(k), 1.0 / static_cast<double>(k));
    m.means.assign(static_cast<std::size_t>(k * d), 0.0);
    m.variances.assign(static_cast<std::size_t>(k * d), 1.0);

    // Initialize from k-means: cluster means, cluster fractions as weights,
    // within-cluster per-dimension variance (floored).
    {
        KMeansModel km = kmeans_fit(x, k, seed, /*max_iter=*/50, /*tol=*/1e-3);
        KMeansAssignment assign = kmeans_assign(km, x);
        m.means = km.centroids;
        std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
        std::vector<double> sq(static_cast<std::size_t>(k * d), 0.0);
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int32_t c = assign.labels[static_cast<std::size_t>(i)];
            ++counts[static_cast<std::size_t>(c)];
            auto row = x.row(i);
            for (std::int64_t j = 0; j < d; ++j) {
                const double diff = row[static_cast<std::size_t>(j)] -
                                    m.means[static_cast<std::size_t>(c * d + j)];
                sq[static_cast<std::size_t>(c * d + j)] += diff * diff;
            }
        }
        for (std::int64_t c = 0; c < k; ++c) {
            const std::int64_t cnt = counts[static_cast<std::size_t>(c)];
            m.weights[static_cast<std::size_t>(c)] =
                static_cast<double>(cnt) / static_cast<double>(n);
            for (std::int64_t j = 0; j < d; ++j) {
                const double var =
                    cnt > 0 ? sq[static_cast<std::size_t>(c * d + j)] / static_cast<double>(cnt)
                            : 1.0;
                m.variances[static_cast<std::size_t>(c * d + j)] = std::max(var, cov_floor);
            }
        }
    }

    std::vector<double> resp(static_cast<std::size_t>(n * k), 0.0);
    double prev_ll = -std::numeric_limits<double>::infinity();

    for (std::int64_t iter = 0; iter < max_iter; ++iter) {
        // E-step: responsibilities and total log-likelihood of the current
        // parameters. Per-row work is independent; the LL sum uses the
        // fixed-chunk deterministic reduction.
        std::vector<double> row_ll(static_cast<std::size_t>(n), 0.0);
        parallel_for(n, [&](std::int64_t i) {
            double* lj = resp.data() + i * k;
            const double lse = row_log_joint(m, x.row(i), lj);
            row_ll[static_cast<std::size_t>(i)] = lse;
            for (std::int64_t c = 0; c < k; ++c)
                lj[c] = std::exp(lj[c] - lse);
        });
        const double ll = chunked_sum(n, [&](std::int64_t i) {
            return row_ll[static_cast<std::size_t>(i)];
        });
        m.log_likelihood_trace.push_back(ll);
        m.iterations_run = iter + 1;

        // M-step, pass 1: component masses and means.
        struct MAcc {
            std::vector<double> nk;
            std::vector<double> mx;
        };
        MAcc zero{std::vector<double>(static_cast<std::size_t>(k), 0.0),
                  std::vector<double>(static_cast<std::size_t>(k * d), 0.0)};
        MAcc acc = chunked_reduce<MAcc>(
            n, zero,
            [&](std::int64_t begin, std::int64_t end) {
                MAcc s{std::vector<double>(static_cast<std::size_t>(k), 0.0),
                       std::vector<double>(static_cast<std::size_t>(k * d), 0.0)};
                for (std::int64_t i = begin; i < end; ++i) {
                    const double* r = resp.data() + i * k;
                    auto row = x.row(i);
                    for (std::int64_t c = 0; c < k; ++c) {
                        s.nk[static_cast<std::size_t>(c)] += r[c];
                        double* dst = s.mx.data() + c * d;
                        for (std::int64_t j = 0; j < d; ++j)
                            dst[j] += r[c] * row[static_cast<std::size_t>(j)];
                    }
                }
                return s;
            },
            [](MAcc a, const MAcc& b) {
                for (std::size_t j = 0; j < a.nk.size(); ++j) a.nk[j] += b.nk[j];
                for (std::size_t j = 0; j < a.mx.size(); ++j) a.mx[j] += b.mx[j];
                return a;
            });

        std::vector<double> new_means = m.means;
        for (std::int64_t c = 0; c < k; ++c) {
            if (acc.nk[static_cast<std::size_t>(c)] <= 1e-12) continue; // starved component kept as-is
            for (std::int64_t j = 0; j < d; ++j)
                new_means[static_cast<std::size_t>(c * d + j)] =
                    acc.mx[static_cast<std::size_t>(c * d + j)] / acc.nk[static_cast<std::size_t>(c)];
        }

        // M-step, pass 2: variances around the new means.
        std::vector<double> sq = chunked_reduce<std::vector<double>>(
            n, std::vector<double>(static_cast<std::size_t>(k * d), 0.0),
            [&](std::int64_t begin, std::int64_t end) {
                std::vector<double> s(static_cast<std::size_t>(k * d), 0.0);
                for (std::int64_t i = begin; i < end; ++i) {
                    const double* r = resp.data() + i * k;
                    auto row = x.row(i);
                    for (std::int64_t c = 0; c < k; ++c) {
                        double* dst = s.data() + c * d;
                        const double* mu = new_means.data() + c * d;
                        for (std::int64_t j = 0; j < d; ++j) {
                            const double diff = row[static_cast<std::size_t>(j)] - mu[j];
                            dst[j] += r[c] * diff * diff;
                        }
                    }
                }
                return s;
            },
            [](std::vector<double> a, const std::vector<double>& b) {
                for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
                return a;
            });

        double weight_total = 0.0;
        for (std::int64_t c = 0; c < k; ++c) {
            const double nk = acc.nk[static_cast<std::size_t>(c)];
            if (nk > 1e-12) {
                for (std::int64_t j = 0; j < d; ++j)
                    m.variances[static_cast<std::size_t>(c * d + j)] = std::max(
                        sq[static_cast<std::size_t>(c * d + j)] / nk, cov_floor);
                m.weights[static_cast<std::size_t>(c)] = nk / static_cast<double>(n);
            }
            weight_total += m.weights[static_cast<std::size_t>(c)];
        }
        for (auto& w : m.weights) w /= weight_total;
        m.means = std::move(new_means);

        if (std::abs(ll - prev_ll) / static_cast<double>(n) < tol) break;
        prev_ll = ll;
    }
    return m;
}

Matrix gmm_responsibilities(const GmmModel& m, const Matrix& x) {
    require(x.cols() == m.dims, "gmm_responsibilities: dimension mismatch");
    Matrix out(x.rows(), m.k);
    std::vector<double> buf;
    parallel_for(x.rows(), [&](std::int64_t i) {
        thread_local std::vector<double> lj;
        lj.resize(static_cast<std::size_t>(m.k));
        const double lse = row_log_joint(m, x.row(i), lj.data());
        for (std::int64_t c = 0; c < m.k; ++c)
            out.at(i, c) = static_cast<float>(std::exp(lj[static_cast<std::size_t>(c)] - lse));
    });
    return out;
}

std::vector<std::int32_t> gmm_assign(const GmmModel& m, const Matrix& x) {
    require(x.cols() == m.dims, "gmm_assign: dimension mismatch");
    std::vector<std::int32_t> out(static_cast<std::size_t>(x.rows()), 0);
    parallel_for(x.rows(), [&](std::int64_t i) {
        thread_local std::vector<double> lj;
        lj.resize(static_cast<std::size_t>(m.k));
        row_log_joint(m, x.row(i), lj.data());
        std::int32_t best = 0;
        double best_v = lj[0];
        for (std::int64_t c = 1; c < m.k; ++c) {
            if (lj[static_cast<std::size_t>(c)] > best_v) {
                best_v = lj[static_cast<std::size_t>(c)];
                best = static_cast<std::int32_t>(c);
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    });
    return out;
}

} // namespace ids
