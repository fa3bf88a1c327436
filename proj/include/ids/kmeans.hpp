#pragma once

#include <cstdint>
#include <vector>

#include "ids/matrix.hpp"

namespace ids {

struct KMeansModel {
    std::vector<double> centroids; // k x d, row-major
    std::int64_t k = 0;
    std::int64_t dims = 0;
    double inertia = 0.0; // sum of squared distance to assigned centroid
    std::int64_t iterations_run = 0;
    std::vector<double> inertia_trace; // one entry per Lloyd iteration

    std::span<const double> centroid(std::int64_t c) const {
        return {centroids.data() + c * dims, static_cast<std::size_t>(dims)};
    }
};

struct KMeansAssignment {
    std::vector<std::int32_t> labels; // argmin cluster per row, ties -> lowest index
    Matrix distances;                 // n x k Euclidean distances
};

// Lloyd iterations from a probability-proportional-to-squared-distance
// seeding, run until the largest centroid shift drops below tol or max_iter.
// Clusters that empty out are re-seeded to the point farthest from its
// assigned centroid.
KMeansModel kmeans_fit(const Matrix& x, std::int64_t k, std::uint64_t seed,
                       std::int64_t max_iter = 300, double tol = 1e-4);

KMeansAssignment kmeans_assign(const KMeansModel& m, const Matrix& x);

} // namespace ids
