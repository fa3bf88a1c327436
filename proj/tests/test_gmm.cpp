#include <doctest.h>

#include <cmath>

#include "ids/errors.hpp"
#include "ids/gmm.hpp"
#include "ids/parallel.hpp"
#include "ids/reference.hpp"

#include "oracles.hpp"

using namespace ids;

TEST_CASE("k=1 recovers sample mean and floored population variance") {
    Matrix x(5, 2);
    const float v[5][2] = {{1, 10}, {2, 10}, {3, 10}, {4, 10}, {5, 10}};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 2; ++j) x.at(i, j) = v[i][j];
    const GmmModel m = gmm_fit(x, 1, 3);
    CHECK(m.weights[0] == doctest::Approx(1.0));
    CHECK(m.mean(0)[0] == doctest::Approx(3.0));
    CHECK(m.mean(0)[1] == doctest::Approx(10.0));
    CHECK(m.variance(0)[0] == doctest::Approx(2.0)); // population variance of 1..5
    CHECK(m.variance(0)[1] == doctest::Approx(m.cov_floor)); // constant dim floored
}

TEST_CASE("responsibilities are row-stochastic; single component all ones") {
    const Matrix x = oracle::random_matrix(50, 3, 12);
    const GmmModel one = gmm_fit(x, 1, 4);
    const Matrix r1 = gmm_responsibilities(one, x);
    for (std::int64_t i = 0; i < 50; ++i) CHECK(r1.at(i, 0) == doctest::Approx(1.0));

    const GmmModel m = gmm_fit(x, 4, 4);
    const Matrix r = gmm_responsibilities(m, x);
    for (std::int64_t i = 0; i < 50; ++i) {
        double sum = 0.0;
        for (std::int64_t c = 0; c < 4; ++c) sum += r.at(i, c);
        CHECK(std::abs(sum - 1.0) < 1e-6); // rows sum to 1 (f32 storage)
    }
}

TEST_CASE("a point at a far component's mean gets responsibility > 0.999") {
    GmmModel m;
    m.k = 2;
    m.dims = 1;
    m.weights = {0.5, 0.5};
    m.means = {0.0, 50.0};
    m.variances = {1.0, 1.0};
    Matrix x(1, 1);
    x.at(0, 0) = 0.0f;
    const Matrix r = gmm_responsibilities(m, x);
    CHECK(r.at(0, 0) > 0.999f);
}

TEST_CASE("two separated 1D blobs recover means and half weights") {
    Matrix x(400, 1);
    Rng rng = Rng::stream(77, 1);
    for (std::int64_t i = 0; i < 200; ++i)
        x.at(i, 0) = static_cast<float>(0.0 + 0.5 * rng.next_normal());
    for (std::int64_t i = 200; i < 400; ++i)
        x.at(i, 0) = static_cast<float>(6.0 + 0.5 * rng.next_normal());
    const GmmModel m = gmm_fit(x, 2, 5);
    const double lo = std::min(m.means[0], m.means[1]);
    const double hi = std::max(m.means[0], m.means[1]);
    CHECK(std::abs(lo - 0.0) < 0.1);
    CHECK(std::abs(hi - 6.0) < 0.1);
    CHECK(m.weights[0] == doctest::Approx(0.5).epsilon(0.1));
    CHECK(m.weights[1] == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("log-likelihood trace is non-decreasing within 1e-7 slack") {
    const Matrix x = oracle::random_matrix(300, 4, 99);
    const GmmModel m = gmm_fit(x, 3, 17);
    REQUIRE(m.log_likelihood_trace.size() >= 1);
    for (std::size_t i = 1; i < m.log_likelihood_trace.size(); ++i)
        CHECK(m.log_likelihood_trace[i] >=
              m.log_likelihood_trace[i - 1] -
                  1e-7 * std::abs(m.log_likelihood_trace[i - 1]));
    // Weights stay a distribution and variances respect the floor.
    double wsum = 0.0;
    for (double w : m.weights) {
        CHECK(w >= 0.0);
        wsum += w;
    }
    CHECK(std::abs(wsum - 1.0) < 1e-9);
    for (double v : m.variances) CHECK(v >= m.cov_floor);
}

TEST_CASE("errors: k > n") {
    CHECK_THROWS_AS(gmm_fit(Matrix(2, 1), 3, 1), DataError);
    GmmModel m;
    m.k = 1;
    m.dims = 2;
    m.weights = {1.0};
    m.means = {0.0, 0.0};
    m.variances = {1.0, 1.0};
    CHECK_THROWS_AS(gmm_responsibilities(m, Matrix(1, 3)), DataError);
}

TEST_CASE("openmp responsibilities match the serial reference bit-for-bit") {
    const Matrix x = oracle::random_matrix(2500, 6, 41);
    const GmmModel m = gmm_fit(x, 4, 19);
    const Matrix serial = reference::gmm_responsibilities(m, x);
    for (int threads : {1, 2, 4}) {
        set_max_threads(threads);
        const Matrix par = gmm_responsibilities(m, x);
        CHECK(par.data() == serial.data());
    }
    set_max_threads(2);
}

TEST_CASE("gmm_fit is identical at every thread count") {
    const Matrix x = oracle::random_matrix(1500, 5, 55);
    set_max_threads(1);
    const GmmModel m1 = gmm_fit(x, 3, 7);
    set_max_threads(4);
    const GmmModel m4 = gmm_fit(x, 3, 7);
    set_max_threads(2);
    CHECK(m1.means == m4.means);
    CHECK(m1.variances == m4.variances);
    CHECK(m1.weights == m4.weights);
    CHECK(m1.log_likelihood_trace == m4.log_likelihood_trace);
}
