// Compares the serial reference kernels against the OpenMP paths on sized-up
// synthetic data and prints a wall-clock table.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "ids/forest.hpp"
#include "ids/gmm.hpp"
#include "ids/kmeans.hpp"
#include "ids/parallel.hpp"
#include "ids/pca.hpp"
#include "ids/reference.hpp"
#include "ids/rng.hpp"
#include "ids/transform.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F f, int repeats = 3) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        f();
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

void print_row(const std::string& name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %12.2f %12.2f %9.2fx\n", name.c_str(), serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

ids::Matrix random_matrix(std::int64_t n, std::int64_t d, std::uint64_t seed) {
    ids::Matrix x(n, d);
    ids::Rng rng = ids::Rng::stream(seed, 0xbe9c4u);
    for (auto& v : x.data()) v = static_cast<float>(rng.next_normal());
    return x;
}

} // namespace

int main(int argc, char** argv) {
    std::int64_t n = 200000;
    std::int64_t d = 40;
    if (argc > 1) n = std::atoll(argv[1]);
    if (argc > 2) d = std::atoll(argv[2]);

    std::printf("rows=%lld dims=%lld threads=%d\n", static_cast<long long>(n),
                static_cast<long long>(d), ids::max_threads());
    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

    const ids::Matrix x = random_matrix(n, d, 7);

    const ids::ScalerParams scaler = ids::fit_scaler(x);
    print_row("apply_scaler",
              time_ms([&] { ids::reference::apply_scaler(scaler, x); }),
              time_ms([&] { ids::apply_scaler(scaler, x); }));

    const ids::KMeansModel km = ids::kmeans_fit(x, 8, 7, /*max_iter=*/5);
    print_row("kmeans_assign",
              time_ms([&] { ids::reference::kmeans_assign_labels(km, x); }),
              time_ms([&] { ids::kmeans_assign(km, x); }));

    const ids::GmmModel gm = ids::gmm_fit(x, 8, 7, /*max_iter=*/3);
    print_row("gmm_responsibilities",
              time_ms([&] { ids::reference::gmm_responsibilities(gm, x); }),
              time_ms([&] { ids::gmm_responsibilities(gm, x); }));

    {
        const auto t_serial = time_ms([&] {
            const auto m = ids::reference::column_moments(x);
            std::vector<double> scale(m.variance.size(), 1.0);
            for (std::size_t j = 0; j < scale.size(); ++j)
                scale[j] = m.variance[j] > 0 ? std::sqrt(m.variance[j]) : 1.0;
            ids::reference::covariance_unit_scaled(x, m.mean, scale);
        });
        const auto t_omp = time_ms([&] { ids::pca_fit(x, d); });
        print_row("covariance+pca_fit", t_serial, t_omp);
    }

    {
        // Forest on a smaller slice so tree growth stays in budget.
        const std::int64_t nf = std::min<std::int64_t>(n, 20000);
        ids::Matrix xf(nf, d);
        for (std::int64_t i = 0; i < nf; ++i)
            for (std::int64_t j = 0; j < d; ++j) xf.at(i, j) = x.at(i, j);
        ids::LabelVector y(static_cast<std::size_t>(nf), 0);
        for (std::int64_t i = 0; i < nf; ++i)
            y[static_cast<std::size_t>(i)] = xf.at(i, 0) > 0 ? 1 : 0;

        ids::TreeParams params;
        params.max_features = ids::MaxFeatures::sqrt();
        const ids::ForestModel forest = ids::rf_fit(xf, y, 25, params, 7);

        const int saved = ids::max_threads();
        const auto t_serial = time_ms([&] {
            ids::set_max_threads(1);
            ids::rf_fit(xf, y, 25, params, 7);
        });
        ids::set_max_threads(saved);
        const auto t_omp = time_ms([&] { ids::rf_fit(xf, y, 25, params, 7); });
        print_row("rf_fit (25 trees)", t_serial, t_omp);

        print_row("forest_predict_proba",
                  time_ms([&] { ids::reference::forest_predict_proba(forest, xf); }),
                  time_ms([&] { ids::forest_predict_proba(forest, xf); }));
    }
    return 0;
}
