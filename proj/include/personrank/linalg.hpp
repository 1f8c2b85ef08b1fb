#pragma once

#include <cstddef>
#include <vector>

namespace personrank {

/// Dense row-major matrix. Scene graphs are small (N around 10), so no
/// sparsity and no BLAS.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    double row_sum(int r) const {
        double s = 0.0;
        for (int c = 0; c < cols_; ++c) s += (*this)(r, c);
        return s;
    }

    double col_sum(int c) const {
        double s = 0.0;
        for (int r = 0; r < rows_; ++r) s += (*this)(r, c);
        return s;
    }

    bool operator==(const Matrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

} // namespace personrank
