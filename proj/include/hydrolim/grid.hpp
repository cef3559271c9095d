#pragma once

#include <cmath>
#include <memory>

#include "hydrolim/core.hpp"
#include "hydrolim/linalg.hpp"

namespace hydrolim {

/// Discretization parameters for the periodic strip T x (0,1):
/// Fourier collocation in x, Chebyshev-Gauss-Lobatto collocation in y.
struct GridSpec {
    int nx = 32;                      ///< Fourier modes in x, positive even
    int ny = 64;                      ///< CGL nodes in y including both walls
    double dealias_fraction = 2.0 / 3.0;

    void validate() const {
        if (nx < 4 || nx % 2 != 0) throw ParameterError("GridSpec: nx must be even and >= 4");
        if (ny < 8) throw ParameterError("GridSpec: ny must be >= 8");
        if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
            throw ParameterError("GridSpec: dealias_fraction must lie in (0,1]");
    }

    bool operator==(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && dealias_fraction == o.dealias_fraction;
    }
};

namespace cheb {

/// CGL nodes on [0,1], ascending, endpoints exact.
inline RVector nodes01(int n) {
    const int N = n - 1;
    RVector y(n);
    for (int j = 0; j <= N; ++j) y[j] = 0.5 * (1.0 - std::cos(PI * j / N));
    y[0] = 0.0;
    y[N] = 1.0;
    if (N % 2 == 0) y[N / 2] = 0.5;
    return y;
}

/// Differentiation matrix for nodal values on nodes01(n) (Trefethen's
/// construction mapped to [0,1], diagonal by the negative-sum trick).
inline Mat diff_matrix(int n) {
    const int N = n - 1;
    RVector x(n), c(n);
    for (int j = 0; j <= N; ++j) {
        x[j] = std::cos(PI * j / N);  // descending on [-1,1]
        c[j] = (j == 0 || j == N) ? 2.0 : 1.0;
        if (j % 2 == 1) c[j] = -c[j];
    }
    Mat d(n, n);
    for (int i = 0; i <= N; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j <= N; ++j) {
            if (i == j) continue;
            d(i, j) = (c[i] / c[j]) / (x[i] - x[j]);
            rowsum += d(i, j);
        }
        d(i, i) = -rowsum;
    }
    // index i carries both x_i (descending) and y_i = (1-x_i)/2 (ascending),
    // so only the chain-rule factor d/dy = -2 d/dx applies
    Mat dm(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dm(i, j) = -2.0 * d(i, j);
    return dm;
}

/// Clenshaw-Curtis weights for int_0^1 over nodes01(n); exact for
/// polynomials of degree <= n-1.
inline RVector cc_weights01(int n) {
    const int N = n - 1;
    RVector w(n);
    for (int j = 0; j <= N; ++j) {
        const double theta = PI * j / N;
        double s = 1.0;
        for (int k = 1; k <= N / 2; ++k) {
            const double b = (2 * k == N) ? 1.0 : 2.0;
            s -= b * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
        }
        w[j] = 2.0 * s / N;
    }
    w[0] *= 0.5;
    w[N] *= 0.5;
    // scale [-1,1] -> [0,1]; the weights are symmetric in the node index
    RVector out(n);
    for (int j = 0; j < n; ++j) out[j] = 0.5 * w[j];
    return out;
}

/// Nodal values on nodes01(n) -> Chebyshev coefficients a_m of
/// f(y) = sum_m a_m T_m(x), x = 1 - 2y.
inline Mat coeff_matrix(int n) {
    const int N = n - 1;
    Mat c(n, n);
    for (int m = 0; m <= N; ++m) {
        const double cm = (m == 0 || m == N) ? 2.0 : 1.0;
        for (int j = 0; j <= N; ++j) {
            const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            c(m, j) = 2.0 / (N * cm * cj) * std::cos(PI * m * j / N);
        }
    }
    return c;
}

/// Clenshaw evaluation of sum a_m T_m(x).
inline double clenshaw(const RVector& a, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (int m = static_cast<int>(a.size()) - 1; m >= 1; --m) {
        const double b0 = 2.0 * x * b1 - b2 + a[m];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + a[0];
}

inline Complex clenshaw(const CVector& a, double x) {
    Complex b1 = 0.0, b2 = 0.0;
    for (int m = static_cast<int>(a.size()) - 1; m >= 1; --m) {
        const Complex b0 = 2.0 * x * b1 - b2 + a[m];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + a[0];
}

/// Coefficients of the x-antiderivative F (F' = f in x, constant term free).
template <class Vec>
inline Vec antiderivative_coeffs(const Vec& a) {
    const int n = static_cast<int>(a.size());
    Vec b(n + 1);
    b[0] = typename Vec::value_type(0);
    for (int m = 1; m <= n; ++m) {
        auto am1 = a[m - 1];
        auto ap1 = (m + 1 < n) ? a[m + 1] : typename Vec::value_type(0);
        if (m == 1) am1 = 2.0 * a[0];  // T_0 coefficient convention
        b[m] = (am1 - ap1) / (2.0 * m);
    }
    return b;
}

}  // namespace cheb

/// Immutable discretization tables shared by every field on a grid.
class Grid {
  public:
    explicit Grid(GridSpec spec) : spec_(spec) {
        spec_.validate();
        y_ = cheb::nodes01(spec_.ny);
        d_ = cheb::diff_matrix(spec_.ny);
        d2_ = d_ * d_;
        d3_ = d2_ * d_;
        w_ = cheb::cc_weights01(spec_.ny);
        coef_ = cheb::coeff_matrix(spec_.ny);
        const int nx = spec_.nx;
        x_.resize(nx);
        for (int m = 0; m < nx; ++m) x_[m] = TWO_PI * m / nx;
        fwd_.resize(static_cast<size_t>(nx) * nx);
        inv_.resize(static_cast<size_t>(nx) * nx);
        for (int ki = 0; ki < nx; ++ki) {
            const int k = wavenumber(ki);
            for (int m = 0; m < nx; ++m) {
                const double ph = k * x_[m];
                fwd_[static_cast<size_t>(ki) * nx + m] = Complex(std::cos(ph), -std::sin(ph)) / double(nx);
                inv_[static_cast<size_t>(m) * nx + ki] = Complex(std::cos(ph), std::sin(ph));
            }
        }
        kcut_ = static_cast<int>(std::floor(spec_.dealias_fraction * (nx / 2)));
    }

    const GridSpec& spec() const { return spec_; }
    int nx() const { return spec_.nx; }
    int ny() const { return spec_.ny; }

    /// wavenumber of storage row ki, k in {-nx/2, ..., nx/2-1}
    int wavenumber(int ki) const { return ki - spec_.nx / 2; }
    int row_of_k(int k) const { return k + spec_.nx / 2; }

    int dealias_cutoff() const { return kcut_; }
    bool retained(int k) const { return std::abs(k) <= kcut_; }

    const RVector& y() const { return y_; }
    const RVector& x() const { return x_; }
    const RVector& quad_weights() const { return w_; }
    const Mat& ddy_matrix() const { return d_; }
    const Mat& d2y_matrix() const { return d2_; }
    const Mat& d3y_matrix() const { return d3_; }
    const Mat& cheb_coeff_matrix() const { return coef_; }

    const Complex* fwd_row(int ki) const { return &fwd_[static_cast<size_t>(ki) * spec_.nx]; }
    const Complex* inv_row(int m) const { return &inv_[static_cast<size_t>(m) * spec_.nx]; }

    /// int_0^1 f dy by Clenshaw-Curtis on one y-column.
    template <class Vec>
    typename Vec::value_type integrate_column(const Vec& f) const {
        typename Vec::value_type s = typename Vec::value_type(0);
        for (int j = 0; j < spec_.ny; ++j) s += w_[j] * f[j];
        return s;
    }

  private:
    GridSpec spec_;
    RVector y_, x_, w_;
    Mat d_, d2_, d3_, coef_;
    CVector fwd_, inv_;
    int kcut_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(const GridSpec& spec) { return std::make_shared<const Grid>(spec); }
inline GridPtr make_grid(int nx, int ny, double frac = 2.0 / 3.0) {
    return make_grid(GridSpec{nx, ny, frac});
}

}  // namespace hydrolim
