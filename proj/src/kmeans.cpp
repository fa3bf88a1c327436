#include "ids/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ids/errors.hpp"
#include "ids/parallel.hpp"
#include "ids/rng.hpp"

namespace ids {

namespace {

struct SumAcc {
    std::vector<double> sums;   // k x d
    std::vector<std::int64_t> counts; // k
};

// argmin over centroids; ties resolve to the lowest cluster index because
// strict less-than is used while scanning in index order.
std::int32_t nearest_centroid(std::span<const float> row,
                              const std::vector<double>& centroids,
                              std::int64_t k, std::int64_t d, double* best_out) {
    std::int32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int64_t c = 0; c < k; ++c) {
        const double dist = sq_distance(
            row, std::span<const double>{centroids.data() + c * d,
                                         static_cast<std::size_t>(d)});
        if (dist < best_d) {
            best_d = dist;
            best = static_cast<std::int32_t>(c);
        }
    }
    if (best_out) *best_out = best_d;
    return best;
}

} // namespace

KMeansModel kmeans_fit(const Matrix& x, std::int64_t k, std::uint64_t seed,
                       std::int64_t max_iter, double tol) {
    const std::int64_t n = x.rows();
    const std::int64_t d = x.cols();
    require(k >= 1, "kmeans_fit: k must be >= 1");
    require(n >= k, "kmeans_fit: k > n");
    for (float v : x.data())
        require(std::isfinite(v), "kmeans_fit: non-finite input");

    KMeansModel model;
    model.k = k;
    model.dims = d;
    model.centroids.assign(static_cast<std::size_t>(k * d), 0.0);

    // Seeding: first centroid uniform, the rest sampled with probability
    // proportional to squared distance from the chosen set.
    Rng rng = Rng::stream(seed, /*a=*/0x6b6d6561u /* "kmea" */);
    std::vector<double> d2(static_cast<std::size_t>(n),
                           std::numeric_limits<double>::infinity());
    {
        const std::int64_t first = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        auto row = x.row(first);
        for (std::int64_t j = 0; j < d; ++j) model.centroids[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)];
    }
    for (std::int64_t c = 1; c < k; ++c) {
        const std::int64_t prev = c - 1;
        parallel_for(n, [&](std::int64_t i) {
            const double dist = sq_distance(
                x.row(i), std::span<const double>{model.centroids.data() + prev * d,
                                                  static_cast<std::size_t>(d)});
            if (dist < d2[static_cast<std::size_t>(i)]) d2[static_cast<std::size_t>(i)] = dist;
        });
        double total = 0.0;
        for (std::int64_t i = 0; i < n; ++i) total += d2[static_cast<std::size_t>(i)];
        std::int64_t pick;
        if (total <= 0.0) {
            pick = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        } else {
            const double u = rng.next_double() * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::int64_t i = 0; i < n; ++i) {
                cum += d2[static_cast<std::size_t>(i)];
                if (u < cum) {
                    pick = i;
                    break;
                }
            }
        }
        auto row = x.row(pick);
        for (std::int64_t j = 0; j < d; ++j)
            model.centroids[static_cast<std::size_t>(c * d + j)] = row[static_cast<std::size_t>(j)];
    }

    std::vector<std::int32_t> labels(static_cast<std::size_t>(n), 0);
    std::vector<double> point_d2(static_cast<std::size_t>(n), 0.0);

    for (std::int64_t iter = 0; iter < max_iter; ++iter) {
        // Assignment step.
        parallel_for(n, [&](std::int64_t i) {
            labels[static_cast<std::size_t>(i)] = nearest_centroid(
                x.row(i), model.centroids, k, d, &point_d2[static_cast<std::size_t>(i)]);
        });
        const double inertia = chunked_sum(n, [&](std::int64_t i) {
            return point_d2[static_cast<std::size_t>(i)];
        });
        model.inertia_trace.push_back(inertia);
        model.inertia = inertia;
        model.iterations_run = iter + 1;

        // Update step: per-chunk partial sums combined in chunk order.
        SumAcc zero;
        zero.sums.assign(static_cast<std::size_t>(k * d), 0.0);
        zero.counts.assign(static_cast<std::size_t>(k), 0);
        SumAcc acc = chunked_reduce<SumAcc>(
            n, zero,
            [&](std::int64_t begin, std::int64_t end) {
                SumAcc s;
                s.sums.assign(static_cast<std::size_t>(k * d), 0.0);
                s.counts.assign(static_cast<std::size_t>(k), 0);
                for (std::int64_t i = begin; i < end; ++i) {
                    const std::int32_t c = labels[static_cast<std::size_t>(i)];
                    auto row = x.row(i);
                    double* dst = s.sums.data() + static_cast<std::int64_t>(c) * d;
                    for (std::int64_t j = 0; j < d; ++j) dst[j] += row[static_cast<std::size_t>(j)];
                    ++s.counts[static_cast<std::size_t>(c)];
                }
                return s;
            },
            [&](SumAcc a, const SumAcc& b) {
                for (std::size_t j = 0; j < a.sums.size(); ++j) a.sums[j] += b.sums[j];
                for (std::size_t j = 0; j < a.counts.size(); ++j) a.counts[j] += b.counts[j];
                return a;
            });

        std::vector<double> next(static_cast<std::size_t>(k * d), 0.0);
        for (std::int64_t c = 0; c < k; ++c) {
            if (acc.counts[static_cast<std::size_t>(c)] > 0) {
                for (std::int64_t j = 0; j < d; ++j)
                    next[static_cast<std::size_t>(c * d + j)] =
                        acc.sums[static_cast<std::size_t>(c * d + j)] /
                        static_cast<double>(acc.counts[static_cast<std::size_t>(c)]);
            } else {
                // Re-seed an empty cluster to the point farthest from its
                // assigned centroid (lowest index on ties).
                std::int64_t far = 0;
                double far_d = -1.0;
                for (std::int64_t i = 0; i < n; ++i) {
                    if (point_d2[static_cast<std::size_t>(i)] > far_d) {
                        far_d = point_d2[static_cast<std::size_t>(i)];
                        far = i;
                    }
                }
                auto row = x.row(far);
                for (std::int64_t j = 0; j < d; ++j)
                    next[static_cast<std::size_t>(c * d + j)] = row[static_cast<std::size_t>(j)];
            }
        }

        double max_shift_sq = 0.0;
        for (std::int64_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (std::int64_t j = 0; j < d; ++j) {
                const double diff = next[static_cast<std::size_t>(c * d + j)] -
                                    model.centroids[static_cast<std::size_t>(c * d + j)];
                s += diff * diff;
            }
            max_shift_sq = std::max(max_shift_sq, s);
        }
        model.centroids = std::move(next);
        if (std::sqrt(max_shift_sq) < tol) break;
    }

    // Inertia reflects the final centroids.
    parallel_for(n, [&](std::int64_t i) {
        nearest_centroid(x.row(i), model.centroids, k, d, &point_d2[static_cast<std::size_t>(i)]);
    });
    model.inertia = chunked_sum(n, [&](std::int64_t i) {
        return point_d2[static_cast<std::size_t>(i)];
    });
    return model;
}

KMeansAssignment kmeans_assign(const KMeansModel& m, const Matrix& x) {
    require(x.cols() == m.dims, "kmeans_assign: dimension mismatch");
    KMeansAssignment out;
    out.labels.resize(static_cast<std::size_t>(x.rows()));
    out.distances = Matrix(x.rows(), m.k);
    parallel_for(x.rows(), [&](std::int64_t i) {
        auto row = x.row(i);
        std::int32_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::int64_t c = 0; c < m.k; ++c) {
            const double dist = sq_distance(row, m.centroid(c));
            out.distances.at(i, c) = static_cast<float>(std::sqrt(dist));
            if (dist < best_d) {
                best_d = dist;
                best = static_cast<std::int32_t>(c);
            }
        }
        out.labels[static_cast<std::size_t>(i)] = best;
    });
    return out;
}

} // namespace ids
