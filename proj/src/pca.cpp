#include "ids/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ids/errors.hpp"
#include "ids/parallel.hpp"

namespace ids {

namespace {

double off_diag_norm(const std::vector<double>& a, std::int64_t d) {
    double s = 0.0;
    for (std::int64_t i = 0; i < d; ++i)
        for (std::int64_t j = 0; j < d; ++j)
            if (i != j) s += a[static_cast<std::size_t>(i * d + j)] * a[static_cast<std::size_t>(i * d + j)];
    return std::sqrt(s);
}

} // namespace

SymmetricEigen jacobi_eigen(const std::vector<double>& input, std::int64_t d,
                            double off_diag_tol, std::int64_t max_sweeps) {
    check_invariant(static_cast<std::int64_t>(input.size()) == d * d,
                    "jacobi_eigen: size mismatch");
    std::vector<double> a = input;
    std::vector<double> v(static_cast<std::size_t>(d * d), 0.0);
    for (std::int64_t i = 0; i < d; ++i) v[static_cast<std::size_t>(i * d + i)] = 1.0;

    auto at = [&](std::int64_t i, std::int64_t j) -> double& {
        return a[static_cast<std::size_t>(i * d + j)];
    };
    auto vt = [&](std::int64_t i, std::int64_t j) -> double& {
        return v[static_cast<std::size_t>(i * d + j)];
    };

    for (std::int64_t sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diag_norm(a, d) < off_diag_tol) break;
        for (std::int64_t p = 0; p < d - 1; ++p) {
            for (std::int64_t q = p + 1; q < d; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                // Rotation angle zeroing a_pq (Golub & Van Loan form).
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::int64_t i = 0; i < d; ++i) {
                    const double aip = at(i, p);
                    const double aiq = at(i, q);
                    at(i, p) = c * aip - s * aiq;
                    at(i, q) = s * aip + c * aiq;
                }
                for (std::int64_t j = 0; j < d; ++j) {
                    const double apj = at(p, j);
                    const double aqj = at(q, j);
                    at(p, j) = c * apj - s * aqj;
                    at(q, j) = s * apj + c * aqj;
                }
                for (std::int64_t i = 0; i < d; ++i) {
                    const double vip = vt(i, p);
                    const double viq = vt(i, q);
                    vt(i, p) = c * vip - s * viq;
                    vt(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    // Sort eigenpairs by value, non-increasing; stable on ties.
    std::vector<std::int64_t> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t i, std::int64_t j) {
        return a[static_cast<std::size_t>(i * d + i)] > a[static_cast<std::size_t>(j * d + j)];
    });

    SymmetricEigen out;
    out.dims = d;
    out.values.resize(static_cast<std::size_t>(d));
    out.vectors.assign(static_cast<std::size_t>(d * d), 0.0);
    for (std::int64_t jj = 0; jj < d; ++jj) {
        const std::int64_t src = order[static_cast<std::size_t>(jj)];
        out.values[static_cast<std::size_t>(jj)] = a[static_cast<std::size_t>(src * d + src)];
        for (std::int64_t i = 0; i < d; ++i)
            out.vectors[static_cast<std::size_t>(i * d + jj)] = v[static_cast<std::size_t>(i * d + src)];
    }
    return out;
}

PcaModel pca_fit(const Matrix& x, std::int64_t k) {
    const std::int64_t n = x.rows();
    const std::int64_t d = x.cols();
    require(n >= 2, "pca_fit: need n >= 2");
    require(k >= 1 && k <= d, "pca_fit: k must be in [1, d]");

    PcaModel m;
    m.d_in = d;
    m.k_out = k;
    m.mean.assign(static_cast<std::size_t>(d), 0.0);
    m.scale.assign(static_cast<std::size_t>(d), 1.0);

    using Vec = std::vector<double>;
    auto vec_add = [](Vec a, const Vec& b) {
        for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
        return a;
    };

    Vec sums = chunked_reduce<Vec>(
        n, Vec(static_cast<std::size_t>(d), 0.0),
        [&](std::int64_t begin, std::int64_t end) {
            Vec s(static_cast<std::size_t>(d), 0.0);
            for (std::int64_t i = begin; i < end; ++i) {
                auto row = x.row(i);
                for (std::int64_t j = 0; j < d; ++j) s[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)];
            }
            return s;
        },
        vec_add);
    for (std::int64_t j = 0; j < d; ++j)
        m.mean[static_cast<std::size_t>(j)] = sums[static_cast<std::size_t>(j)] / static_cast<double>(n);

    Vec sq = chunked_reduce<Vec>(
        n, Vec(static_cast<std::size_t>(d), 0.0),
        [&](std::int64_t begin, std::int64_t end) {
            Vec s(static_cast<std::size_t>(d), 0.0);
            for (std::int64_t i = begin; i < end; ++i) {
                auto row = x.row(i);
                for (std::int64_t j = 0; j < d; ++j) {
                    const double diff = row[static_cast<std::size_t>(j)] - m.mean[static_cast<std::size_t>(j)];
                    s[static_cast<std::size_t>(j)] += diff * diff;
                }
            }
            return s;
        },
        vec_add);
    for (std::int64_t j = 0; j < d; ++j) {
        const double var = sq[static_cast<std::size_t>(j)] / static_cast<double>(n);
        m.scale[static_cast<std::size_t>(j)] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    // Covariance of the centered, unit-scaled data: C = (1/n) sum z z^T.
    Vec cov = chunked_reduce<Vec>(
        n, Vec(static_cast<std::size_t>(d * d), 0.0),
        [&](std::int64_t begin, std::int64_t end) {
            Vec s(static_cast<std::size_t>(d * d), 0.0);
            Vec z(static_cast<std::size_t>(d), 0.0);
            for (std::int64_t i = begin; i < end; ++i) {
                auto row = x.row(i);
                for (std::int64_t j = 0; j < d; ++j)
                    z[static_cast<std::size_t>(j)] =
                        (row[static_cast<std::size_t>(j)] - m.mean[static_cast<std::size_t>(j)]) /
                        m.scale[static_cast<std::size_t>(j)];
                for (std::int64_t r = 0; r < d; ++r) {
                    const double zr = z[static_cast<std::size_t>(r)];
                    double* dst = s.data() + r * d;
                    for (std::int64_t c2 = r; c2 < d; ++c2)
                        dst[c2] += zr * z[static_cast<std::size_t>(c2)];
                }
            }
            return s;
        },
        vec_add);
    for (std::int64_t r = 0; r < d; ++r)
        for (std::int64_t c2 = r; c2 < d; ++c2) {
            const double val = cov[static_cast<std::size_t>(r * d + c2)] / static_cast<double>(n);
            cov[static_cast<std::size_t>(r * d + c2)] = val;
            cov[static_cast<std::size_t>(c2 * d + r)] = val;
        }

    m.total_variance = 0.0;
    for (std::int64_t j = 0; j < d; ++j)
        m.total_variance += cov[static_cast<std::size_t>(j * d + j)];

    SymmetricEigen eig = jacobi_eigen(cov, d);

    m.eigenvalues.assign(eig.values.begin(), eig.values.begin() + k);
    m.components.assign(static_cast<std::size_t>(d * k), 0.0);
    for (std::int64_t j = 0; j < k; ++j) {
        // Sign convention: largest-|entry| positive (lowest index on ties).
        std::int64_t arg = 0;
        double best = -1.0;
        for (std::int64_t i = 0; i < d; ++i) {
            const double mag = std::abs(eig.vectors[static_cast<std::size_t>(i * d + j)]);
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        const double sign = eig.vectors[static_cast<std::size_t>(arg * d + j)] < 0.0 ? -1.0 : 1.0;
        for (std::int64_t i = 0; i < d; ++i)
            m.components[static_cast<std::size_t>(i * k + j)] =
                sign * eig.vectors[static_cast<std::size_t>(i * d + j)];
    }
    return m;
}

Matrix pca_transform(const PcaModel& m, const Matrix& x) {
    require(x.cols() == m.d_in, "pca_transform: dimension mismatch");
    const std::int64_t d = m.d_in;
    const std::int64_t k = m.k_out;
    Matrix out(x.rows(), k);
    parallel_for(x.rows(), [&](std::int64_t i) {
        auto row = x.row(i);
        thread_local std::vector<double> z;
        z.resize(static_cast<std::size_t>(d));
        for (std::int64_t j = 0; j < d; ++j)
            z[static_cast<std::size_t>(j)] =
                (row[static_cast<std::size_t>(j)] - m.mean[static_cast<std::size_t>(j)]) /
                m.scale[static_cast<std::size_t>(j)];
        for (std::int64_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (std::int64_t j = 0; j < d; ++j)
                s += m.components[static_cast<std::size_t>(j * k + c)] * z[static_cast<std::size_t>(j)];
            out.at(i, c) = static_cast<float>(s);
        }
    });
    return out;
}

std::vector<double> explained_variance_ratio(const PcaModel& m) {
    std::vector<double> out(m.eigenvalues.size(), 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double r = m.total_variance > 0.0 ? m.eigenvalues[j] / m.total_variance : 0.0;
        out[j] = std::clamp(r, 0.0, 1.0);
    }
    return out;
}

double reduction_ratio(const PcaModel& m) {
    return static_cast<double>(m.k_out) / static_cast<double>(m.d_in);
}

} // namespace ids
