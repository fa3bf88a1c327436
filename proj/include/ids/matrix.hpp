#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ids/errors.hpp"

namespace ids {

// Row-major n x d feature matrix. Cell values are 32-bit floats end to end
// (the cleaning stage downcasts all numeric storage to 32 bits); model-side
// math runs in double and rounds back on write.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::int64_t rows, std::int64_t cols, float fill = 0.0f)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows * cols), fill) {}

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }

    float& at(std::int64_t r, std::int64_t c) {
        return data_[static_cast<std::size_t>(r * cols_ + c)];
    }
    float at(std::int64_t r, std::int64_t c) const {
        return data_[static_cast<std::size_t>(r * cols_ + c)];
    }

    std::span<float> row(std::int64_t r) {
        return {data_.data() + r * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<const float> row(std::int64_t r) const {
        return {data_.data() + r * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    void push_row(std::span<const float> values) {
        check_invariant(static_cast<std::int64_t>(values.size()) == cols_ || rows_ == 0,
                        "push_row: width mismatch");
        if (rows_ == 0 && cols_ == 0) cols_ = static_cast<std::int64_t>(values.size());
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    // Copy of selected rows, in the given order.
    Matrix take_rows(std::span<const std::int64_t> indices) const {
        Matrix out(static_cast<std::int64_t>(indices.size()), cols_);
        for (std::int64_t i = 0; i < out.rows(); ++i) {
            auto src = row(indices[static_cast<std::size_t>(i)]);
            auto dst = out.row(i);
            for (std::int64_t c = 0; c < cols_; ++c) dst[static_cast<std::size_t>(c)] = src[static_cast<std::size_t>(c)];
        }
        return out;
    }

    // Horizontal concatenation (same row count).
    static Matrix hconcat(const Matrix& a, const Matrix& b) {
        check_invariant(a.rows() == b.rows(), "hconcat: row count mismatch");
        Matrix out(a.rows(), a.cols() + b.cols());
        for (std::int64_t r = 0; r < a.rows(); ++r) {
            auto dst = out.row(r);
            auto ra = a.row(r);
            auto rb = b.row(r);
            std::size_t j = 0;
            for (float v : ra) dst[j++] = v;
            for (float v : rb) dst[j++] = v;
        }
        return out;
    }

    bool operator==(const Matrix& other) const = default;

private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<float> data_;
};

using LabelVector = std::vector<std::int32_t>;

inline double sq_distance(std::span<const float> a, std::span<const float> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = static_cast<double>(a[j]) - static_cast<double>(b[j]);
        s += diff * diff;
    }
    return s;
}

inline double sq_distance(std::span<const float> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = static_cast<double>(a[j]) - b[j];
        s += diff * diff;
    }
    return s;
}

} // namespace ids
