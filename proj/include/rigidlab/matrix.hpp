#ifndef RIGIDLAB_MATRIX_HPP
#define RIGIDLAB_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rigidlab/errors.hpp"
#include "rigidlab/scalar.hpp"

namespace rigidlab {

/// Dense row-major matrix of Scalars.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw InvalidInputError("matrix entry count does not match rows x cols");
    }

    static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw InvalidInputError("ragged matrix rows");
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<Scalar>& entries() const noexcept { return data_; }

    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector row(std::size_t r) const {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    bool is_exact() const { return all_exact(data_); }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    Eigen::MatrixXd to_eigen() const {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (*this)(r, c).value();
        return m;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const auto& s : data_) acc += s.value() * s.value();
        return std::sqrt(acc);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

inline Vector multiply(const Matrix& m, const Vector& v) {
    if (v.size() != m.cols()) throw MismatchError("matrix-vector size mismatch");
    Vector out(m.rows(), Scalar(0));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Scalar acc(0);
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (!v[c].is_zero()) acc += m(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

inline double norm(const Vector& v) {
    double acc = 0.0;
    for (const auto& s : v) acc += s.value() * s.value();
    return std::sqrt(acc);
}

inline bool is_zero_vector(const Vector& v) {
    for (const auto& s : v)
        if (!s.is_zero()) return false;
    return true;
}

/// ||m v|| / (||m||_F ||v||); zero when either factor vanishes.
inline double relative_residual(const Matrix& m, const Vector& v) {
    const double scale = m.frobenius_norm() * norm(v);
    if (scale == 0.0) return 0.0;
    return norm(multiply(m, v)) / scale;
}

}  // namespace rigidlab

#endif  // RIGIDLAB_MATRIX_HPP
