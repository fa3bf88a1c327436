#include <doctest.h>

#include <cmath>

#include "ids/errors.hpp"
#include "ids/pca.hpp"

#include "oracles.hpp"

using namespace ids;

namespace {

// Reconstruction error ||Z - Y W^T||_F of the centered unit-scaled data,
// computed in double from the model parameters.
double reconstruction_error(const PcaModel& m, const Matrix& x) {
    const std::int64_t n = x.rows();
    const std::int64_t d = m.d_in;
    const std::int64_t k = m.k_out;
    double err = 0.0;
    std::vector<double> z(static_cast<std::size_t>(d)), y(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < n; ++i) {
        auto row = x.row(i);
        for (std::int64_t j = 0; j < d; ++j)
            z[static_cast<std::size_t>(j)] =
                (row[static_cast<std::size_t>(j)] - m.mean[static_cast<std::size_t>(j)]) /
                m.scale[static_cast<std::size_t>(j)];
        for (std::int64_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (std::int64_t j = 0; j < d; ++j)
                s += m.components[static_cast<std::size_t>(j * k + c)] *
                     z[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(c)] = s;
        }
        for (std::int64_t j = 0; j < d; ++j) {
            double recon = 0.0;
            for (std::int64_t c = 0; c < k; ++c)
                recon += m.components[static_cast<std::size_t>(j * k + c)] *
                         y[static_cast<std::size_t>(c)];
            const double diff = z[static_cast<std::size_t>(j)] - recon;
            err += diff * diff;
        }
    }
    return std::sqrt(err);
}

} // namespace

TEST_CASE("jacobi matches hand-computed eigensystem of [[2,1],[1,2]]") {
    const std::vector<double> a = {2, 1, 1, 2};
    const SymmetricEigen e = jacobi_eigen(a, 2);
    CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // First eigenvector is (1,1)/sqrt(2) up to sign.
    CHECK(std::abs(e.vectors[0]) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(e.vectors[2]) == doctest::Approx(inv_sqrt2));
    CHECK(e.vectors[0] * e.vectors[2] > 0.0);
    // Second is (1,-1)/sqrt(2).
    CHECK(e.vectors[1] * e.vectors[3] < 0.0);
}

TEST_CASE("jacobi eigenvalues match the bisection oracle on random matrices") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        const std::int64_t d = 2 + static_cast<std::int64_t>(trial % 5); // up to 6
        const auto a = oracle::random_symmetric(d, trial);
        const SymmetricEigen e = jacobi_eigen(a, d);
        const auto expected = oracle::symmetric_eigenvalues(a, d);
        for (std::int64_t j = 0; j < d; ++j)
            CHECK(e.values[static_cast<std::size_t>(j)] ==
                  doctest::Approx(expected[static_cast<std::size_t>(j)]).epsilon(1e-8));
    }
}

TEST_CASE("rank-1 data: first component explains all variance") {
    Matrix x(50, 2);
    for (std::int64_t i = 0; i < 50; ++i) {
        x.at(i, 0) = static_cast<float>(i);
        x.at(i, 1) = static_cast<float>(i); // y = x line
    }
    const PcaModel m = pca_fit(x, 2);
    const auto evr = explained_variance_ratio(m);
    CHECK(evr[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(evr[1] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(m.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-6)); // unit-scaled
}

TEST_CASE("constructed covariance [[2,1],[1,2]] normalizes to {1.5, 0.5}") {
    // x2 = x1/2 + sqrt(3)/2 * e with var(x1)=var(e)=2 gives cov [[2,1],[1,2]].
    Matrix x(4000, 2);
    Rng rng = Rng::stream(123, 9);
    for (std::int64_t i = 0; i < 4000; ++i) {
        const double x1 = std::sqrt(2.0) * rng.next_normal();
        const double e = std::sqrt(2.0) * rng.next_normal();
        x.at(i, 0) = static_cast<float>(x1);
        x.at(i, 1) = static_cast<float>(0.5 * x1 + 0.5 * std::sqrt(3.0) * e);
    }
    const PcaModel m = pca_fit(x, 2);
    // After the unit-variance rescale the covariance becomes the correlation
    // matrix [[1, .5], [.5, 1]] with eigenvalues {1.5, 0.5} (sampling noise).
    CHECK(m.eigenvalues[0] == doctest::Approx(1.5).epsilon(0.05));
    CHECK(m.eigenvalues[1] == doctest::Approx(0.5).epsilon(0.05));
    const auto evr = explained_variance_ratio(m);
    CHECK(evr[0] == doctest::Approx(0.75).epsilon(0.05));
    CHECK(evr[1] == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("components are orthonormal and eigenvalues sorted") {
    const Matrix x = oracle::random_matrix(300, 7, 33);
    const PcaModel m = pca_fit(x, 7);
    for (std::int64_t a = 0; a < 7; ++a) {
        for (std::int64_t b = 0; b < 7; ++b) {
            double dot = 0.0;
            for (std::int64_t j = 0; j < 7; ++j)
                dot += m.components[static_cast<std::size_t>(j * 7 + a)] *
                       m.components[static_cast<std::size_t>(j * 7 + b)];
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
        }
    }
    double eig_sum = 0.0;
    for (std::size_t j = 1; j < m.eigenvalues.size(); ++j)
        CHECK(m.eigenvalues[j] <= m.eigenvalues[j - 1] + 1e-12);
    for (double v : m.eigenvalues) {
        CHECK(v >= -1e-10);
        eig_sum += v;
    }
    CHECK(eig_sum <= m.total_variance + 1e-8);
    CHECK(eig_sum == doctest::Approx(m.total_variance).epsilon(1e-8)); // k = d
}

TEST_CASE("transform: fit-data projections decorrelate, mean row maps to zero") {
    const Matrix x = oracle::random_matrix(500, 6, 44, 3.0);
    const PcaModel m = pca_fit(x, 6);
    const Matrix y = pca_transform(m, x);

    std::vector<double> mean(6, 0.0);
    for (std::int64_t i = 0; i < y.rows(); ++i)
        for (std::int64_t c = 0; c < 6; ++c) mean[static_cast<std::size_t>(c)] += y.at(i, c);
    for (auto& v : mean) v /= static_cast<double>(y.rows());

    for (std::int64_t a = 0; a < 6; ++a) {
        for (std::int64_t b = a; b < 6; ++b) {
            double cov = 0.0;
            for (std::int64_t i = 0; i < y.rows(); ++i)
                cov += (y.at(i, a) - mean[static_cast<std::size_t>(a)]) *
                       (y.at(i, b) - mean[static_cast<std::size_t>(b)]);
            cov /= static_cast<double>(y.rows());
            if (a == b) {
                // Per-component variance equals the eigenvalue.
                CHECK(cov == doctest::Approx(m.eigenvalues[static_cast<std::size_t>(a)])
                                 .epsilon(1e-6));
            } else {
                CHECK(std::abs(cov) < 1e-6);
            }
        }
    }

    Matrix mean_row(1, 6);
    for (std::int64_t j = 0; j < 6; ++j)
        mean_row.at(0, j) = static_cast<float>(m.mean[static_cast<std::size_t>(j)]);
    const Matrix y0 = pca_transform(m, mean_row);
    for (std::int64_t c = 0; c < 6; ++c) CHECK(std::abs(y0.at(0, c)) < 1e-5);
}

TEST_CASE("3x3 constructed case matches hand-computed projection") {
    // Distinct column scales; checks the full center/scale/project path.
    Matrix x(3, 3);
    const float rows[3][3] = {{1, 10, 100}, {2, 20, 200}, {3, 30, 330}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) x.at(i, j) = rows[i][j];
    const PcaModel m = pca_fit(x, 3);
    const Matrix y = pca_transform(m, x);
    // Hand-compute W^T z for row 0 from the model's own parameters.
    for (std::int64_t c = 0; c < 3; ++c) {
        double expect = 0.0;
        for (std::int64_t j = 0; j < 3; ++j) {
            const double z = (x.at(0, j) - m.mean[static_cast<std::size_t>(j)]) /
                             m.scale[static_cast<std::size_t>(j)];
            expect += m.components[static_cast<std::size_t>(j * 3 + c)] * z;
        }
        CHECK(y.at(0, c) == doctest::Approx(expect).epsilon(1e-5));
    }
}

TEST_CASE("reconstruction error is non-increasing in k; k=d reconstructs") {
    const Matrix x = oracle::random_matrix(60, 5, 55, 2.0);
    double prev = 1e300;
    for (std::int64_t k = 1; k <= 5; ++k) {
        const PcaModel m = pca_fit(x, k);
        const double err = reconstruction_error(m, x);
        CHECK(err <= prev + 1e-9);
        prev = err;
        if (k == 5) CHECK(err < 1e-5);
    }
}

TEST_CASE("reduction ratio: 10/45, 10/79, k=d") {
    PcaModel m;
    m.k_out = 10;
    m.d_in = 45;
    CHECK(reduction_ratio(m) == doctest::Approx(0.22222).epsilon(1e-3));
    m.d_in = 79;
    CHECK(reduction_ratio(m) == doctest::Approx(0.12658).epsilon(1e-3));
    m.d_in = 10;
    CHECK(reduction_ratio(m) == doctest::Approx(1.0));
}

TEST_CASE("sigma=0 features get scale 1; errors for bad k and tiny n") {
    Matrix x(10, 2);
    for (std::int64_t i = 0; i < 10; ++i) {
        x.at(i, 0) = static_cast<float>(i);
        x.at(i, 1) = 3.0f;
    }
    const PcaModel m = pca_fit(x, 1);
    CHECK(m.scale[1] == 1.0);

    CHECK_THROWS_AS(pca_fit(x, 3), DataError);
    CHECK_THROWS_AS(pca_fit(x, 0), DataError);
    CHECK_THROWS_AS(pca_fit(Matrix(1, 2), 1), DataError);
    CHECK_THROWS_AS(pca_transform(m, Matrix(5, 3)), DataError);
}
