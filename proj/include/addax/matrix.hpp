#pragma once

// Dense exact linear algebra over Q(i), sized for small structure-constant
// problems (dimensions well under a hundred). Everything is deterministic:
// elimination always picks the first usable pivot.

#include "addax/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace addax {

class Matrix {
public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one();
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows) {
        if (rows.empty()) return Matrix();
        Matrix m(rows.size(), rows[0].size());
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw std::invalid_argument("Matrix::from_rows: ragged rows");
            for (size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Scalar& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const Scalar& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    std::vector<Scalar> row(size_t i) const {
        return std::vector<Scalar>(data_.begin() + static_cast<long>(i * cols_),
                                   data_.begin() + static_cast<long>((i + 1) * cols_));
    }
    std::vector<Scalar> col(size_t j) const {
        std::vector<Scalar> c(rows_);
        for (size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) = default;

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.check_same_shape(b);
        Matrix r = a;
        for (size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.check_same_shape(b);
        Matrix r = a;
        for (size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
        return r;
    }
    friend Matrix operator*(const Scalar& s, const Matrix& a) {
        Matrix r = a;
        for (auto& v : r.data_) v *= s;
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(a.rows_, b.cols_);
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                const Scalar& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (size_t j = 0; j < b.cols_; ++j) {
                    const Scalar& bkj = b.at(k, j);
                    if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
                }
            }
        return r;
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
        std::vector<Scalar> r(rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!v.is_zero()) return false;
        return true;
    }

    Scalar trace() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix::trace: not square");
        Scalar t;
        for (size_t i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    Matrix pow(unsigned e) const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix::pow: not square");
        Matrix r = identity(rows_);
        for (unsigned j = 0; j < e; ++j) r = r * *this;
        return r;
    }

    // In-place Gauss-Jordan; returns pivot columns. First nonzero entry in
    // each surviving row is 1 and is the only nonzero entry in its column.
    std::vector<size_t> rref() {
        std::vector<size_t> pivots;
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_; ++c) {
            size_t sel = r;
            while (sel < rows_ && at(sel, c).is_zero()) ++sel;
            if (sel == rows_) continue;
            swap_rows(sel, r);
            Scalar inv = at(r, c).inverse();
            for (size_t j = c; j < cols_; ++j) at(r, j) *= inv;
            for (size_t i = 0; i < rows_; ++i) {
                if (i == r || at(i, c).is_zero()) continue;
                Scalar f = at(i, c);
                for (size_t j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    size_t rank() const {
        Matrix copy = *this;
        return copy.rref().size();
    }

    bool invertible() const { return rows_ == cols_ && rank() == rows_; }

    Matrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix::inverse: not square");
        Matrix aug(rows_, 2 * cols_);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = Scalar::one();
        }
        auto pivots = aug.rref();
        if (pivots.size() != rows_ || pivots.back() >= cols_)
            throw std::domain_error("Matrix::inverse: singular matrix");
        Matrix inv(rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
        return inv;
    }

    // Basis of the right null space, each vector normalized so its entry at
    // the corresponding free column is 1 (the reduced-echelon representative).
    std::vector<std::vector<Scalar>> kernel_basis() const {
        Matrix red = *this;
        auto pivots = red.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (size_t c : pivots) is_pivot[c] = true;
        std::vector<std::vector<Scalar>> basis;
        for (size_t free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<Scalar> v(cols_);
            v[free] = Scalar::one();
            for (size_t r = 0; r < pivots.size(); ++r)
                v[pivots[r]] = -red.at(r, free);
            basis.push_back(std::move(v));
        }
        return basis;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }
    void swap_rows(size_t a, size_t b) {
        if (a == b) return;
        for (size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }

    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Scalar> data_;
};

} // namespace addax
