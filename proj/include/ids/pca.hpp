#pragma once

#include <cstdint>
#include <vector>

#include "ids/matrix.hpp"

namespace ids {

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Returns eigenvalues in non-increasing order and the matching eigenvectors
// as columns of `vectors` (row-major d x d, column j = eigenvector j).
struct SymmetricEigen {
    std::vector<double> values;
    std::vector<double> vectors; // d x d row-major; vectors[i*d + j] = V_ij
    std::int64_t dims = 0;
};

SymmetricEigen jacobi_eigen(const std::vector<double>& a, std::int64_t d,
                            double off_diag_tol = 1e-10,
                            std::int64_t max_sweeps = 64);

struct PcaModel {
    std::vector<double> mean;        // d
    std::vector<double> scale;       // d, per-feature sigma (1 where sigma = 0)
    std::vector<double> components;  // d x k row-major (column j = component j)
    std::vector<double> eigenvalues; // k, non-increasing
    double total_variance = 0.0;     // trace of the covariance matrix
    std::int64_t d_in = 0;
    std::int64_t k_out = 0;
};

// Centers by the mean, rescales each feature to unit variance (sigma = 0
// features keep scale 1), forms C = (1/n) sum x x^T, eigendecomposes it with
// cyclic Jacobi rotations and keeps the top-k eigenpairs. Component signs
// are fixed so the largest-magnitude entry of each column is positive.
PcaModel pca_fit(const Matrix& x, std::int64_t k);

// y_i = W^T ((x_i - mean) / scale)
Matrix pca_transform(const PcaModel& m, const Matrix& x);

// eigenvalues / total_variance
std::vector<double> explained_variance_ratio(const PcaModel& m);

// k_out / d_in
double reduction_ratio(const PcaModel& m);

} // namespace ids
