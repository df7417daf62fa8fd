#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cliffmech/errors.hpp"

// Dense double matrices just large enough for this library (8n <= a few
// dozen): LU solve with partial pivoting and a scaling-and-squaring matrix
// exponential with a Taylor core.

namespace cliffmech {

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    double inf_norm() const {
        double best = 0.0;
        for (int r = 0; r < rows_; ++r) {
            double row = 0.0;
            for (int c = 0; c < cols_; ++c) row += std::abs((*this)(r, c));
            if (row > best) best = row;
        }
        return best;
    }

    friend Matrix operator*(const Matrix& A, const Matrix& B) {
        if (A.cols_ != B.rows_) throw std::invalid_argument("Matrix multiply: shape mismatch");
        Matrix C(A.rows_, B.cols_);
        for (int i = 0; i < A.rows_; ++i) {
            for (int k = 0; k < A.cols_; ++k) {
                const double aik = A(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < B.cols_; ++j) C(i, j) += aik * B(k, j);
            }
        }
        return C;
    }

    friend Matrix operator+(const Matrix& A, const Matrix& B) {
        Matrix C(A.rows_, A.cols_);
        for (std::size_t i = 0; i < A.a_.size(); ++i) C.a_[i] = A.a_[i] + B.a_[i];
        return C;
    }

    friend Matrix operator-(const Matrix& A, const Matrix& B) {
        Matrix C(A.rows_, A.cols_);
        for (std::size_t i = 0; i < A.a_.size(); ++i) C.a_[i] = A.a_[i] - B.a_[i];
        return C;
    }

    friend Matrix operator*(double s, const Matrix& A) {
        Matrix C(A.rows_, A.cols_);
        for (std::size_t i = 0; i < A.a_.size(); ++i) C.a_[i] = s * A.a_[i];
        return C;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        if (x.size() != static_cast<std::size_t>(cols_))
            throw std::invalid_argument("Matrix apply: length mismatch");
        std::vector<double> y(rows_, 0.0);
        for (int r = 0; r < rows_; ++r) {
            double acc = 0.0;
            for (int c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
            y[r] = acc;
        }
        return y;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

/// Solves A x = b by LU with partial pivoting; throws singular_system_error
/// when a pivot underflows.
inline std::vector<double> lu_solve(Matrix A, std::vector<double> b) {
    const int n = A.rows();
    if (A.cols() != n || b.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("lu_solve: shape mismatch");
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(A(col, col));
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(A(r, col)) > best) { best = std::abs(A(r, col)); pivot = r; }
        }
        if (best < 1e-300) throw singular_system_error("lu_solve: singular matrix");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(A(pivot, c), A(col, c));
            std::swap(b[pivot], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = A(r, col) / A(col, col);
            if (f == 0.0) continue;
            A(r, col) = 0.0;
            for (int c = col + 1; c < n; ++c) A(r, c) -= f * A(col, c);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= A(r, c) * x[c];
        x[r] = acc / A(r, r);
    }
    return x;
}

/// exp(A) by scaling and squaring around a Taylor core. The argument is
/// halved until its norm is at most 1/2, the series is summed to round-off,
/// and the result squared back; accurate to ~1e-12 relative for norms up to
/// about 10.
inline Matrix expm(const Matrix& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("expm: square matrix required");
    const int n = A.rows();
    const double norm = A.inf_norm();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) { scale *= 0.5; ++squarings; }
    Matrix B = scale * A;
    Matrix X = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = (1.0 / k) * (term * B);
        X = X + term;
        if (term.inf_norm() < 1e-18 * X.inf_norm()) break;
    }
    for (int s = 0; s < squarings; ++s) X = X * X;
    return X;
}

}  // namespace cliffmech
