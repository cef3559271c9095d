#pragma once

#include <algorithm>
#include <cmath>

#include "hydrolim/grid.hpp"

namespace hydrolim {

/// Real nodal samples f(x_m, y_j), x-major.
struct NodalField {
    GridPtr grid;
    RVector v;

    NodalField() = default;
    explicit NodalField(GridPtr g) : grid(std::move(g)), v(static_cast<size_t>(grid->nx()) * grid->ny(), 0.0) {}

    double& at(int m, int j) { return v[static_cast<size_t>(m) * grid->ny() + j]; }
    double at(int m, int j) const { return v[static_cast<size_t>(m) * grid->ny() + j]; }

    double max_abs() const {
        double r = 0.0;
        for (double a : v) r = std::max(r, std::abs(a));
        return r;
    }
};

/// Fourier-in-x coefficients times Chebyshev-in-y nodal values:
/// c(k, y_j) with k = -nx/2 .. nx/2-1, row-major in k.
struct SpectralField {
    GridPtr grid;
    CVector c;
    bool reality = true;  ///< conjugate-symmetric in k (real physical field)

    SpectralField() = default;
    explicit SpectralField(GridPtr g, bool real_field = true)
        : grid(std::move(g)), c(static_cast<size_t>(grid->nx()) * grid->ny(), Complex(0.0)), reality(real_field) {}

    int nx() const { return grid->nx(); }
    int ny() const { return grid->ny(); }

    Complex& at(int ki, int j) { return c[static_cast<size_t>(ki) * grid->ny() + j]; }
    Complex at(int ki, int j) const { return c[static_cast<size_t>(ki) * grid->ny() + j]; }
    Complex* row(int ki) { return &c[static_cast<size_t>(ki) * grid->ny()]; }
    const Complex* row(int ki) const { return &c[static_cast<size_t>(ki) * grid->ny()]; }
    Complex* row_of_k(int k) { return row(grid->row_of_k(k)); }
    const Complex* row_of_k(int k) const { return row(grid->row_of_k(k)); }

    SpectralField& operator+=(const SpectralField& o) {
        for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& z : c) z *= a;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

    double max_abs() const {
        double r = 0.0;
        for (const auto& z : c) r = std::max(r, std::abs(z));
        return r;
    }
};

inline void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (a.grid->spec() == b.grid->spec()) return;
    throw DimensionError("fields live on different grids");
}

/// Forward transform, convention fhat(k) = (1/nx) sum_m f(x_m) e^{-ik x_m}.
inline SpectralField transform_x(const GridPtr& g, const NodalField& f) {
    if (f.v.size() != static_cast<size_t>(g->nx()) * g->ny())
        throw DimensionError("transform_x: nodal size does not match grid");
    SpectralField out(g);
    const int nx = g->nx(), ny = g->ny();
    for (int ki = 0; ki < nx; ++ki) {
        const Complex* w = g->fwd_row(ki);
        Complex* dst = out.row(ki);
        for (int m = 0; m < nx; ++m) {
            const Complex wm = w[m];
            const double* src = &f.v[static_cast<size_t>(m) * ny];
            for (int j = 0; j < ny; ++j) dst[j] += wm * src[j];
        }
    }
    return out;
}

inline NodalField inverse_transform_x(const SpectralField& f) {
    NodalField out(f.grid);
    const int nx = f.nx(), ny = f.ny();
    for (int m = 0; m < nx; ++m) {
        const Complex* w = f.grid->inv_row(m);
        double* dst = &out.v[static_cast<size_t>(m) * ny];
        for (int ki = 0; ki < nx; ++ki) {
            const Complex wm = w[ki];
            const Complex* src = f.row(ki);
            for (int j = 0; j < ny; ++j) dst[j] += (wm * src[j]).real();
        }
    }
    return out;
}

/// Complex-valued inverse, for fields without conjugate symmetry.
inline std::vector<CVector> inverse_transform_x_complex(const SpectralField& f) {
    const int nx = f.nx(), ny = f.ny();
    std::vector<CVector> out(nx, CVector(ny, Complex(0.0)));
    for (int m = 0; m < nx; ++m) {
        const Complex* w = f.grid->inv_row(m);
        for (int ki = 0; ki < nx; ++ki)
            for (int j = 0; j < ny; ++j) out[m][j] += w[ki] * f.at(ki, j);
    }
    return out;
}

/// d/dx: multiply row k by ik; the Nyquist row k = -nx/2 is zeroed.
inline SpectralField ddx(const SpectralField& f) {
    SpectralField out(f.grid, f.reality);
    const int ny = f.ny();
    for (int ki = 0; ki < f.nx(); ++ki) {
        const int k = f.grid->wavenumber(ki);
        if (k == -f.nx() / 2) continue;
        const Complex ik(0.0, double(k));
        for (int j = 0; j < ny; ++j) out.at(ki, j) = ik * f.at(ki, j);
    }
    return out;
}

/// d/dy via the CGL differentiation matrix, per mode.
inline SpectralField ddy(const SpectralField& f) {
    SpectralField out(f.grid, f.reality);
    const Mat& d = f.grid->ddy_matrix();
    const int ny = f.ny();
    for (int ki = 0; ki < f.nx(); ++ki) {
        const Complex* src = f.row(ki);
        Complex* dst = out.row(ki);
        for (int i = 0; i < ny; ++i) {
            Complex s(0.0);
            for (int j = 0; j < ny; ++j) s += d(i, j) * src[j];
            dst[i] = s;
        }
    }
    return out;
}

inline SpectralField apply_y_matrix(const SpectralField& f, const Mat& m) {
    SpectralField out(f.grid, f.reality);
    const int ny = f.ny();
    for (int ki = 0; ki < f.nx(); ++ki) {
        const Complex* src = f.row(ki);
        Complex* dst = out.row(ki);
        for (int i = 0; i < ny; ++i) {
            Complex s(0.0);
            for (int j = 0; j < ny; ++j) s += m(i, j) * src[j];
            dst[i] = s;
        }
    }
    return out;
}

namespace detail {

/// Per-mode partial integral int_lo^hi of a y-column via the Chebyshev
/// antiderivative; exact on the polynomial space of the grid.
inline Complex column_partial_integral(const Grid& g, const Complex* col, double lo, double hi) {
    const int ny = g.ny();
    CVector nodal(col, col + ny);
    CVector a = g.cheb_coeff_matrix().apply(nodal);
    CVector b = cheb::antiderivative_coeffs(a);
    // y -> x = 1 - 2y; int_0^y f dy' = -(F(x) - F(1))/2 with F the x-antiderivative
    const Complex f1 = cheb::clenshaw(b, 1.0);
    auto upto = [&](double yv) { return -0.5 * (cheb::clenshaw(b, 1.0 - 2.0 * yv) - f1); };
    return upto(hi) - upto(lo);
}

}  // namespace detail

/// Per-mode integral int_lo^hi fhat(k, y) dy. Full interval uses the closed
/// Clenshaw-Curtis weights; partial intervals use the spectral antiderivative.
inline CVector integrate_y(const SpectralField& f, double lo, double hi) {
    if (lo < 0.0 || hi > 1.0 || lo > hi) throw ParameterError("integrate_y: bounds must satisfy 0 <= lo <= hi <= 1");
    const int nx = f.nx();
    CVector out(nx, Complex(0.0));
    if (lo == 0.0 && hi == 1.0) {
        const RVector& w = f.grid->quad_weights();
        for (int ki = 0; ki < nx; ++ki) {
            Complex s(0.0);
            const Complex* src = f.row(ki);
            for (int j = 0; j < f.ny(); ++j) s += w[j] * src[j];
            out[ki] = s;
        }
        return out;
    }
    for (int ki = 0; ki < nx; ++ki) out[ki] = detail::column_partial_integral(*f.grid, f.row(ki), lo, hi);
    return out;
}

/// Cumulative integral A(k, y_j) = int_0^{y_j} fhat(k, y') dy' per mode.
inline SpectralField antiderivative_y(const SpectralField& f) {
    SpectralField out(f.grid, f.reality);
    const Grid& g = *f.grid;
    const int ny = g.ny();
    for (int ki = 0; ki < f.nx(); ++ki) {
        CVector nodal(f.row(ki), f.row(ki) + ny);
        CVector a = g.cheb_coeff_matrix().apply(nodal);
        CVector b = cheb::antiderivative_coeffs(a);
        const Complex f1 = cheb::clenshaw(b, 1.0);
        for (int j = 0; j < ny; ++j)
            out.at(ki, j) = -0.5 * (cheb::clenshaw(b, 1.0 - 2.0 * g.y()[j]) - f1);
    }
    return out;
}

/// Zero every mode with |k| > dealias_fraction * nx/2.
inline SpectralField dealias(const SpectralField& f) {
    SpectralField out = f;
    const int ny = f.ny();
    for (int ki = 0; ki < f.nx(); ++ki)
        if (!f.grid->retained(f.grid->wavenumber(ki)))
            std::fill(out.row(ki), out.row(ki) + ny, Complex(0.0));
    return out;
}

/// Pointwise product computed nodally, then dealiased (2/3 rule).
inline SpectralField multiply(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    NodalField an = inverse_transform_x(a);
    NodalField bn = inverse_transform_x(b);
    NodalField p(a.grid);
    for (size_t i = 0; i < p.v.size(); ++i) p.v[i] = an.v[i] * bn.v[i];
    return dealias(transform_x(a.grid, p));
}

/// Plancherel-normalized L2 norm: (sum_k int_0^1 |fhat(k,y)|^2 dy)^{1/2}.
inline double l2_norm(const SpectralField& f) {
    const RVector& w = f.grid->quad_weights();
    double s = 0.0;
    for (int ki = 0; ki < f.nx(); ++ki) {
        const Complex* src = f.row(ki);
        for (int j = 0; j < f.ny(); ++j) s += w[j] * std::norm(src[j]);
    }
    return std::sqrt(s);
}

inline double linf_norm(const SpectralField& f) { return inverse_transform_x(f).max_abs(); }

/// Largest relative defect of conjugate symmetry c(-k) = conj(c(k)).
inline double reality_defect(const SpectralField& f) {
    double worst = 0.0;
    const double scale = std::max(f.max_abs(), 1e-300);
    for (int k = 1; k < f.nx() / 2; ++k) {
        const Complex* p = f.row_of_k(k);
        const Complex* m = f.row_of_k(-k);
        for (int j = 0; j < f.ny(); ++j)
            worst = std::max(worst, std::abs(m[j] - std::conj(p[j])));
    }
    return worst / scale;
}

}  // namespace hydrolim
