#pragma once

#include <cmath>
#include <cstddef>

#include "hydrolim/core.hpp"

namespace hydrolim {

/// Dense row-major real matrix, sized for per-mode collocation solves
/// (n is the node count, at most a few hundred).
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    Mat operator*(const Mat& b) const {
        Mat c(rows_, b.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int l = 0; l < cols_; ++l) {
                const double ail = (*this)(i, l);
                if (ail == 0.0) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += ail * b(l, j);
            }
        return c;
    }

    RVector apply(const RVector& x) const {
        RVector y(rows_, 0.0);
        for (int i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    CVector apply(const CVector& x) const {
        CVector y(rows_, Complex(0.0));
        for (int i = 0; i < rows_; ++i) {
            Complex s(0.0);
            for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

  private:
    int rows_ = 0, cols_ = 0;
    RVector a_;
};

/// LU factorization with partial pivoting of a real square matrix.
/// solve() works for real and complex right-hand sides (real factors).
class Lu {
  public:
    Lu() = default;

    explicit Lu(Mat a) : lu_(std::move(a)), piv_(lu_.rows()) {
        const int n = lu_.rows();
        for (int i = 0; i < n; ++i) piv_[i] = i;
        for (int col = 0; col < n; ++col) {
            int p = col;
            double best = std::abs(lu_(col, col));
            for (int i = col + 1; i < n; ++i) {
                const double v = std::abs(lu_(i, col));
                if (v > best) { best = v; p = i; }
            }
            if (best == 0.0) throw NumericalError("singular matrix in LU factorization");
            if (p != col) {
                for (int j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(col, j));
                std::swap(piv_[p], piv_[col]);
            }
            const double d = lu_(col, col);
            for (int i = col + 1; i < n; ++i) {
                const double f = lu_(i, col) / d;
                lu_(i, col) = f;
                for (int j = col + 1; j < n; ++j) lu_(i, j) -= f * lu_(col, j);
            }
        }
    }

    template <class Vec>
    Vec solve(const Vec& b) const {
        const int n = lu_.rows();
        Vec x(n);
        for (int i = 0; i < n; ++i) x[i] = b[piv_[i]];
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
            x[i] /= lu_(i, i);
        }
        return x;
    }

    bool valid() const { return lu_.rows() > 0; }

  private:
    Mat lu_;
    std::vector<int> piv_;
};

}  // namespace hydrolim
