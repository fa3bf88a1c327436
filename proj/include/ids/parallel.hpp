#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ids {

// Global worker budget for all OpenMP regions (--threads on the CLI).
int max_threads();
void set_max_threads(int n);

// Fixed chunk size for deterministic reductions. Partial results are computed
// per chunk and combined in chunk order, so floating-point sums are identical
// at every thread count.
inline constexpr std::int64_t kReduceChunk = 4096;

inline std::int64_t chunk_count(std::int64_t n, std::int64_t chunk = kReduceChunk) {
    return (n + chunk - 1) / chunk;
}

// Element-wise parallel loop; f(i) must only write state owned by index i.
template <class F>
void parallel_for(std::int64_t n, F f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        f(i);
    }
}

// Range version: f(begin, end) over [0, n) split into fixed-size chunks.
template <class F>
void parallel_for_chunks(std::int64_t n, std::int64_t chunk, F f) {
    const std::int64_t nchunks = chunk_count(n, chunk);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
    for (std::int64_t ci = 0; ci < nchunks; ++ci) {
        const std::int64_t begin = ci * chunk;
        const std::int64_t end = begin + chunk < n ? begin + chunk : n;
        f(begin, end);
    }
}

// Deterministic reduction: chunk_fn(begin, end) -> T evaluated in parallel,
// partials combined left to right in chunk order.
template <class T, class ChunkFn, class Combine>
T chunked_reduce(std::int64_t n, T init, ChunkFn chunk_fn, Combine combine,
                 std::int64_t chunk = kReduceChunk) {
    const std::int64_t nchunks = chunk_count(n, chunk);
    std::vector<T> partials(static_cast<std::size_t>(nchunks > 0 ? nchunks : 0));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
    for (std::int64_t ci = 0; ci < nchunks; ++ci) {
        const std::int64_t begin = ci * chunk;
        const std::int64_t end = begin + chunk < n ? begin + chunk : n;
        partials[static_cast<std::size_t>(ci)] = chunk_fn(begin, end);
    }
    T acc = init;
    for (const T& p : partials) acc = combine(acc, p);
    return acc;
}

// Deterministic sum of f(i) over [0, n).
template <class F>
double chunked_sum(std::int64_t n, F f, std::int64_t chunk = kReduceChunk) {
    return chunked_reduce<double>(
        n, 0.0,
        [&](std::int64_t begin, std::int64_t end) {
            double s = 0.0;
            for (std::int64_t i = begin; i < end; ++i) s += f(i);
            return s;
        },
        [](double a, double b) { return a + b; }, chunk);
}

} // namespace ids
