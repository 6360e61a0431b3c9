#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "shiftspec/rational.hpp"

namespace shiftspec {

// Dense matrix over complex rationals, row-major.
class ExactMatrix {
  public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ComplexRational(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    ComplexRational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const ComplexRational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.cols_ != b.rows_) throw PreconditionViolation("matrix product shape mismatch");
        ExactMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const ComplexRational& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const ComplexRational& bkj = b.at(k, j);
                    if (!bkj.is_zero()) out.at(i, j) += aik * bkj;
                }
            }
        return out;
    }

    friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionViolation("matrix sum shape mismatch");
        ExactMatrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
        return out;
    }

    friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionViolation("matrix diff shape mismatch");
        ExactMatrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
        return out;
    }

    ExactMatrix scaled(const ComplexRational& s) const {
        ExactMatrix out = *this;
        for (auto& v : out.data_) v *= s;
        return out;
    }

    std::vector<ComplexRational> apply(const std::vector<ComplexRational>& x) const {
        if (x.size() != cols_) throw PreconditionViolation("matrix apply shape mismatch");
        std::vector<ComplexRational> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            ComplexRational s(0);
            for (std::size_t j = 0; j < cols_; ++j)
                if (!x[j].is_zero()) s += at(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    bool operator==(const ExactMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<ComplexRational> data_;
};

// Exact inverse by Gaussian elimination with partial pivoting on |.|^2.
inline ExactMatrix inverse(const ExactMatrix& a) {
    if (a.rows() != a.cols()) throw PreconditionViolation("inverse requires a square matrix");
    std::size_t n = a.rows();
    ExactMatrix m = a;
    ExactMatrix inv = ExactMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        Rational best = m.at(col, col).abs_sq();
        for (std::size_t r = col + 1; r < n; ++r) {
            Rational cand = m.at(r, col).abs_sq();
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best == 0) throw PreconditionViolation("singular matrix");
        if (pivot != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m.at(pivot, j), m.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        ComplexRational d = m.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m.at(col, j) /= d;
            inv.at(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            ComplexRational factor = m.at(r, col);
            if (factor.is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                m.at(r, j) -= factor * m.at(col, j);
                inv.at(r, j) -= factor * inv.at(col, j);
            }
        }
    }
    return inv;
}

}  // namespace shiftspec
