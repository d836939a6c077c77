#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dsmvlc {

using cplx = std::complex<double>;

// Dense column-major matrix. Blocks are tiny (a handful of rows/columns),
// so this stays a plain container; arithmetic lives with the algorithms
// that need to account for it.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::span<T> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const T> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using Block = Matrix<cplx>;
using RealMatrix = Matrix<double>;

// Plain product, used on the encoder side where nothing is tallied.
inline Block matmul(const Block& a, const Block& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    Block out(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx f = b(k, j);
            if (f == cplx{}) continue;
            for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) += a(i, k) * f;
        }
    return out;
}

} // namespace dsmvlc
