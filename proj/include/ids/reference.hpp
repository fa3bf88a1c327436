#pragma once

#include <cstdint>
#include <vector>

#include "ids/forest.hpp"
#include "ids/gmm.hpp"
#include "ids/kmeans.hpp"
#include "ids/matrix.hpp"
#include "ids/transform.hpp"

// Straight-line serial implementations of the hot kernels, kept as the
// comparison baseline for the OpenMP paths. Row-wise kernels must agree
// bit-for-bit with the parallel versions; reduction kernels (which the
// parallel path computes with fixed-chunk ordering) agree to floating-point
// reassociation tolerance.
namespace ids::reference {

std::vector<std::int32_t> kmeans_assign_labels(const KMeansModel& m, const Matrix& x);

Matrix gmm_responsibilities(const GmmModel& m, const Matrix& x);

Matrix apply_scaler(const ScalerParams& p, const Matrix& x);

// Column means, population variances and the covariance of centered
// unit-scaled data, accumulated in plain row order.
struct Moments {
    std::vector<double> mean;
    std::vector<double> variance;
};
Moments column_moments(const Matrix& x);

std::vector<double> covariance_unit_scaled(const Matrix& x,
                                           const std::vector<double>& mean,
                                           const std::vector<double>& scale);

Matrix forest_predict_proba(const ForestModel& m, const Matrix& x);

} // namespace ids::reference
