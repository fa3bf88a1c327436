#pragma once

#include <cstdint>
#include <vector>

#include "ids/matrix.hpp"

namespace ids {

// Diagonal-covariance Gaussian mixture fitted by EM.
struct GmmModel {
    std::vector<double> weights;   // k, sums to 1
    std::vector<double> means;     // k x d
    std::vector<double> variances; // k x d, >= cov_floor
    std::vector<double> log_likelihood_trace; // total data log-likelihood per iteration
    double cov_floor = 1e-6;
    std::int64_t k = 0;
    std::int64_t dims = 0;
    std::int64_t iterations_run = 0;

    std::span<const double> mean(std::int64_t c) const {
        return {means.data() + c * dims, static_cast<std::size_t>(dims)};
    }
    std::span<const double> variance(std::int64_t c) const {
        return {variances.data() + c * dims, static_cast<std::size_t>(dims)};
    }
};

// EM initialized from a k-means run on the same data; stops when the mean
// per-sample log-likelihood improves by less than tol, or at max_iter.
GmmModel gmm_fit(const Matrix& x, std::int64_t k, std::uint64_t seed,
                 std::int64_t max_iter = 300, double tol = 1e-4,
                 double cov_floor = 1e-6);

// Row-stochastic posterior responsibilities, computed in log space.
Matrix gmm_responsibilities(const GmmModel& m, const Matrix& x);

// Posterior argmax per row (ties -> lowest component index).
std::vector<std::int32_t> gmm_assign(const GmmModel& m, const Matrix& x);

} // namespace ids
