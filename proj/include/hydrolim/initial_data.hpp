#pragma once

#include <cmath>

#include "hydrolim/gevrey.hpp"

namespace hydrolim {

/// Built-in data family: u0 = c0 (y^2 - y) + a cos(x) y(1-y)(1-2y),
/// v0 = -int_0^y dx u0. Satisfies no-slip, divergence-free, zero vertical
/// mean of dx u0, and dy^2 u0 >= 2 c0 - 6|a| >= 2 delta0.
struct DataSpec {
    double c0 = 1.0;       ///< shear amplitude, > 0
    double a = 0.1;        ///< perturbation amplitude
    double delta0 = 0.2;   ///< convexity margin, > 0
    int N0 = 10;           ///< Sobolev level, >= 10
    double M_bound = 0.0;  ///< optional cap on the Gevrey data bound (0 = unchecked)

    void validate() const {
        if (!(c0 > 0.0)) throw ParameterError("DataSpec: c0 must be > 0");
        if (!(delta0 > 0.0)) throw ParameterError("DataSpec: delta0 must be > 0");
        if (N0 < 10) throw ParameterError("DataSpec: N0 must be >= 10");
        if (std::abs(a) > (c0 - delta0) / 3.0 + 1e-15)
            throw ParameterError("DataSpec: need |a| <= (c0 - delta0)/3 for the built-in family");
    }
};

inline std::pair<SpectralField, SpectralField> make_family(const DataSpec& spec, const GridPtr& g) {
    spec.validate();
    NodalField u0(g);
    for (int m = 0; m < g->nx(); ++m) {
        const double cx = std::cos(g->x()[m]);
        for (int j = 0; j < g->ny(); ++j) {
            const double y = g->y()[j];
            u0.at(m, j) = spec.c0 * (y * y - y) + spec.a * cx * y * (1.0 - y) * (1.0 - 2.0 * y);
        }
    }
    SpectralField u0h = transform_x(g, u0);
    SpectralField v0h = antiderivative_y(ddx(u0h));
    v0h *= -1.0;
    return {std::move(u0h), std::move(v0h)};
}

/// Recompute the diagnostic vertical velocity v = -int_0^y dx u dz.
inline SpectralField family_velocity(const SpectralField& u) {
    SpectralField v = antiderivative_y(ddx(u));
    v *= -1.0;
    return v;
}

/// Constant mean pressure gradient of the Poiseuille balance,
/// c = eta dy^2 ubar0 at the walls (averaged); the corner-compatible data
/// families have equal curvature at both walls.
inline double poiseuille_gradient(const SpectralField& u0, double eta = 1.0) {
    const Grid& g = *u0.grid;
    const Mat& d2 = g.d2y_matrix();
    Complex c0(0.0), c1(0.0);
    const Complex* ub = u0.row_of_k(0);
    for (int j = 0; j < g.ny(); ++j) {
        c0 += d2(0, j) * ub[j];
        c1 += d2(g.ny() - 1, j) * ub[j];
    }
    return 0.5 * eta * (c0 + c1).real();
}

/// Normalization of the area term in the corner compatibility condition.
/// The paper writes "- int_S dy^2 u0" without fixing a 1/|S| factor; the
/// x-fluctuating part of the condition is normalization-independent.
enum class AreaNorm { Mean, Raw, None };

struct CompatReport {
    double divergence = 0.0;        ///< max |dx u0 + dy v0|
    double boundary = 0.0;          ///< max wall value of (u0, v0)
    double vertical_mean = 0.0;     ///< max_k!=0 |int_0^1 u0hat(k) dy|
    double corner_fluct = 0.0;      ///< x-fluctuating corner residual, both walls
    double corner_mean = 0.0;       ///< k=0 corner residual under the chosen norm
    double v_consistency = 0.0;     ///< max |v0 + int_0^y dx u0|

    double worst(double corner_tol_scale = 1.0) const {
        return std::max({divergence, boundary, vertical_mean, corner_fluct * corner_tol_scale});
    }
};

namespace detail {

struct CornerData {
    RVector wall0, wall1;  ///< nodal dy^2 u0 at the walls, per x node
    RVector rhs;           ///< int_0^1 (-dx u0^2 + dy^2 u0) dy, per x node
    double area_mean = 0.0;  ///< x-mean of int_0^1 dy^2 u0 dy
};

inline CornerData corner_data(const SpectralField& u0) {
    const Grid& g = *u0.grid;
    CornerData cd;
    SpectralField d2u = apply_y_matrix(u0, g.d2y_matrix());
    NodalField d2n = inverse_transform_x(d2u);
    const int nx = g.nx(), ny = g.ny();
    cd.wall0.resize(nx);
    cd.wall1.resize(nx);
    for (int m = 0; m < nx; ++m) {
        cd.wall0[m] = d2n.at(m, 0);
        cd.wall1[m] = d2n.at(m, ny - 1);
    }
    SpectralField u0sq = multiply(u0, u0);
    SpectralField dxu2 = ddx(u0sq);
    CVector ii(nx, Complex(0.0));
    {
        CVector t1 = integrate_y(dxu2, 0.0, 1.0);
        CVector t2 = integrate_y(d2u, 0.0, 1.0);
        for (int ki = 0; ki < nx; ++ki) ii[ki] = -t1[ki] + t2[ki];
        cd.area_mean = t2[g.row_of_k(0)].real();
    }
    cd.rhs.resize(nx);
    for (int m = 0; m < nx; ++m) {
        Complex s(0.0);
        const Complex* w = g.inv_row(m);
        for (int ki = 0; ki < nx; ++ki) s += w[ki] * ii[ki];
        cd.rhs[m] = s.real();
    }
    return cd;
}

inline double x_mean(const RVector& v) {
    double s = 0.0;
    for (double a : v) s += a;
    return s / v.size();
}

}  // namespace detail

inline CompatReport check_compatibility(const SpectralField& u0, const SpectralField& v0,
                                        AreaNorm norm = AreaNorm::Mean) {
    require_same_grid(u0, v0);
    const Grid& g = *u0.grid;
    CompatReport rep;
    SpectralField div = ddx(u0) + ddy(v0);
    rep.divergence = div.max_abs();
    NodalField un = inverse_transform_x(u0), vn = inverse_transform_x(v0);
    for (int m = 0; m < g.nx(); ++m)
        rep.boundary = std::max({rep.boundary, std::abs(un.at(m, 0)), std::abs(un.at(m, g.ny() - 1)),
                                 std::abs(vn.at(m, 0)), std::abs(vn.at(m, g.ny() - 1))});
    CVector mean = integrate_y(u0, 0.0, 1.0);
    for (int ki = 0; ki < g.nx(); ++ki)
        if (g.wavenumber(ki) != 0) rep.vertical_mean = std::max(rep.vertical_mean, std::abs(mean[ki]));

    auto cd = detail::corner_data(u0);
    const double w0m = detail::x_mean(cd.wall0), w1m = detail::x_mean(cd.wall1);
    const double rm = detail::x_mean(cd.rhs);
    for (int m = 0; m < g.nx(); ++m) {
        rep.corner_fluct = std::max(rep.corner_fluct, std::abs((cd.wall0[m] - w0m) - (cd.rhs[m] - rm)));
        rep.corner_fluct = std::max(rep.corner_fluct, std::abs((cd.wall1[m] - w1m) - (cd.rhs[m] - rm)));
    }
    double area = 0.0;
    if (norm == AreaNorm::Mean) area = cd.area_mean;
    if (norm == AreaNorm::Raw) area = TWO_PI * cd.area_mean;
    rep.corner_mean = std::max(std::abs(w0m - (rm - area)), std::abs(w1m - (rm - area)));

    SpectralField vrec = family_velocity(u0);
    rep.v_consistency = (vrec - v0).max_abs();
    return rep;
}

/// Enforce the x-fluctuating corner condition by a fixed-point iteration on
/// the quadratic term dx int u0^2 dy, adding b0(x) y^2(1-y)^3 + b1(x) y^3(1-y)^2
/// plus the compensator 140 y^3(1-y)^3 that restores the zero vertical mean
/// of the x-dependent part (so the divergence-free/mean conditions survive
/// exactly). Wall curvature response of the own-wall basis term is 2.
struct Com2Result {
    SpectralField u0;
    int iterations = 0;
    double residual = 0.0;
};

inline Com2Result correct_com2(const SpectralField& u0_in, const DataSpec& spec, double tol = 1e-10,
                               int itmax = 50) {
    const GridPtr gp = u0_in.grid;
    const Grid& g = *gp;
    const int nx = g.nx(), ny = g.ny();
    {
        auto pre = check_compatibility(u0_in, family_velocity(u0_in));
        if (pre.divergence > 1e-9 || pre.vertical_mean > 1e-9 || pre.boundary > 1e-10)
            throw ParameterError("correct_com2: input violates the first-order compatibility conditions");
    }
    RVector q0(ny), q1(ny), comp(ny);
    for (int j = 0; j < ny; ++j) {
        const double y = g.y()[j];
        q0[j] = y * y * std::pow(1.0 - y, 3);
        q1[j] = std::pow(y, 3) * sq(1.0 - y);
        comp[j] = 140.0 * std::pow(y, 3) * std::pow(1.0 - y, 3);
    }
    RVector b0(nx, 0.0), b1(nx, 0.0);
    NodalField base = inverse_transform_x(u0_in);
    SpectralField cur = u0_in;
    double res = 0.0;
    for (int it = 0; it <= itmax; ++it) {
        NodalField un(gp);
        for (int m = 0; m < nx; ++m)
            for (int j = 0; j < ny; ++j)
                un.at(m, j) = base.at(m, j) + b0[m] * q0[j] + b1[m] * q1[j] -
                              (b0[m] + b1[m]) / 60.0 * comp[j];
        cur = transform_x(gp, un);
        auto cd = detail::corner_data(cur);
        const double w0m = detail::x_mean(cd.wall0), w1m = detail::x_mean(cd.wall1);
        const double rm = detail::x_mean(cd.rhs);
        res = 0.0;
        RVector r0(nx), r1(nx);
        for (int m = 0; m < nx; ++m) {
            r0[m] = (cd.wall0[m] - w0m) - (cd.rhs[m] - rm);
            r1[m] = (cd.wall1[m] - w1m) - (cd.rhs[m] - rm);
            res = std::max({res, std::abs(r0[m]), std::abs(r1[m])});
        }
        if (res < tol) {
            NodalField d2 = inverse_transform_x(apply_y_matrix(cur, g.d2y_matrix()));
            double mind2 = d2.v[0];
            for (double v : d2.v) mind2 = std::min(mind2, v);
            if (mind2 < 2.0 * spec.delta0 - 1e-12)
                throw NumericalError("correct_com2: convexity margin lost after correction");
            return {std::move(cur), it, res};
        }
        for (int m = 0; m < nx; ++m) {
            b0[m] -= r0[m] / 2.0;
            b1[m] -= r1[m] / 2.0;
        }
        const double b0m = detail::x_mean(b0), b1m = detail::x_mean(b1);
        for (int m = 0; m < nx; ++m) {
            b0[m] -= b0m;
            b1[m] -= b1m;
        }
    }
    throw NumericalError("correct_com2: fixed point failed to contract in " + std::to_string(itmax) +
                         " iterations (residual " + std::to_string(res) + ")");
}

/// M = ||dy u0||_{X^{N0}} + ||dy^3 u0||_{X^{N0-4}} at (sigma, tau0).
inline double check_gevrey_bound(const SpectralField& u0, double sigma, double tau0, int N0) {
    GevreyParams p{sigma, tau0, 1.0};
    const Grid& g = *u0.grid;
    return gevrey_norm(ddy(u0), double(N0), 0.0, p) +
           gevrey_norm(apply_y_matrix(u0, g.d3y_matrix()), double(N0 - 4), 0.0, p);
}

}  // namespace hydrolim
