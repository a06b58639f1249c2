#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace netdesign {

// Dense row-major matrix. Networks here are tiny (n <= 25), so a flat
// vector with bounds-checked access is all we need.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix square(std::size_t n, T fill = T{}) { return Matrix(n, n, fill); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    T& at(std::size_t i, std::size_t j) {
        check(i, j);
        return data_[i * cols_ + j];
    }
    const T& at(std::size_t i, std::size_t j) const {
        check(i, j);
        return data_[i * cols_ + j];
    }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    void check(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_) throw std::out_of_range("Matrix index out of range");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using DMatrix = Matrix<double>;
using IMatrix = Matrix<long long>;

}  // namespace netdesign
