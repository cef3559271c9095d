#pragma once

#include <cmath>
#include <iostream>

#include "hydrolim/field.hpp"

namespace hydrolim {

/// Gevrey weight parameters: Phi(t,k) = tau(t) <k>^sigma, tau(t) = tau0 e^{-beta t}.
struct GevreyParams {
    double sigma = 1.0;   ///< Gevrey exponent, theorem range [8/9, 1]
    double tau0 = 0.5;    ///< initial radius, > 0
    double beta = 4.0;    ///< radius damping rate, >= 1

    void validate(bool warn = true) const {
        if (!(tau0 > 0.0)) throw ParameterError("GevreyParams: tau0 must be > 0");
        if (!(beta >= 1.0)) throw ParameterError("GevreyParams: beta must be >= 1");
        if (warn && (sigma < 8.0 / 9.0 || sigma > 1.0))
            std::cerr << "[hydrolim] warning: sigma=" << sigma
                      << " outside the theorem range [8/9,1]; solvers remain runnable\n";
    }

    double tau(double t) const { return tau0 * std::exp(-beta * t); }
};

inline double phi(double t, double k, const GevreyParams& p) {
    if (t < 0.0) throw ParameterError("phi: t must be >= 0");
    return p.tau(t) * std::pow(bracket_k(k), p.sigma);
}

/// Hard limit on tau(t) <k_max>^sigma before e^{Phi} leaves double range.
constexpr double PHI_OVERFLOW_LIMIT = 700.0;

inline void check_multiplier_guard(const GevreyParams& p, double t, int kmax) {
    const double worst = p.tau(t) * std::pow(bracket_k(double(kmax)), p.sigma);
    if (worst > PHI_OVERFLOW_LIMIT)
        throw OverflowError("Gevrey multiplier overflow: tau(t)<k_max>^sigma = " + std::to_string(worst) +
                            " exceeds " + std::to_string(PHI_OVERFLOW_LIMIT));
}

/// f_Phi = F^{-1}(e^{+-Phi(t,k)} fhat); sign=-1 inverts sign=+1 exactly per mode.
inline SpectralField apply_multiplier(const SpectralField& f, double t, const GevreyParams& p, int sign) {
    if (sign != 1 && sign != -1) throw ParameterError("apply_multiplier: sign must be +-1");
    if (sign == 1) check_multiplier_guard(p, t, f.nx() / 2);
    SpectralField out = f;
    for (int ki = 0; ki < f.nx(); ++ki) {
        const double w = std::exp(sign * phi(t, f.grid->wavenumber(ki), p));
        for (int j = 0; j < f.ny(); ++j) out.at(ki, j) *= w;
    }
    return out;
}

/// ||f||_{X^r_{sigma,tau(t)}} = (sum_k <k>^{2r} e^{2 Phi} int_0^1 |fhat|^2 dy)^{1/2}.
inline double gevrey_norm(const SpectralField& f, double r, double t, const GevreyParams& p) {
    check_multiplier_guard(p, t, f.nx() / 2);
    const RVector& w = f.grid->quad_weights();
    double s = 0.0;
    for (int ki = 0; ki < f.nx(); ++ki) {
        const double k = f.grid->wavenumber(ki);
        const double mult = std::pow(bracket_k(k), 2.0 * r) * std::exp(2.0 * phi(t, k, p));
        double col = 0.0;
        const Complex* src = f.row(ki);
        for (int j = 0; j < f.ny(); ++j) col += w[j] * std::norm(src[j]);
        s += mult * col;
    }
    return std::sqrt(s);
}

/// Boundary-trace variant |h|_{X^r} for per-mode data h(k) without y-dependence.
inline double gevrey_trace_norm(const CVector& h, const Grid& g, double r, double t, const GevreyParams& p) {
    if (h.size() != static_cast<size_t>(g.nx())) throw DimensionError("gevrey_trace_norm: mode count mismatch");
    check_multiplier_guard(p, t, g.nx() / 2);
    double s = 0.0;
    for (int ki = 0; ki < g.nx(); ++ki) {
        const double k = g.wavenumber(ki);
        s += std::pow(bracket_k(k), 2.0 * r) * std::exp(2.0 * phi(t, k, p)) * std::norm(h[ki]);
    }
    return std::sqrt(s);
}

/// Plain Sobolev norms on trace data (no Gevrey weight), used by the
/// Lemma checks that live in H^r_x.
inline double sobolev_trace_norm(const CVector& h, const Grid& g, double r) {
    double s = 0.0;
    for (int ki = 0; ki < g.nx(); ++ki)
        s += std::pow(bracket_k(g.wavenumber(ki)), 2.0 * r) * std::norm(h[ki]);
    return std::sqrt(s);
}

/// Smooth even cutoff: 0 on |x|<=1/2, 1 on |x|>=1, C^inf step between,
/// built from s(u) = g(u)/(g(u)+g(1-u)) with g(u) = e^{-1/u}.
struct CutoffProfile {
    double operator()(double x) const {
        const double a = std::abs(x);
        if (a <= 0.5) return 0.0;
        if (a >= 1.0) return 1.0;
        const double u = 2.0 * a - 1.0;
        auto bump = [](double v) { return v <= 0.0 ? 0.0 : std::exp(-1.0 / v); };
        const double gu = bump(u), gv = bump(1.0 - u);
        return gu / (gu + gv);
    }
};

/// P_{>=N}: scale mode k by chi(k/N). N = 0 is the everything-but-the-mean
/// limit (chi(k/0+) = 1 for k != 0, 0 for k = 0).
inline SpectralField cutoff_high(const SpectralField& f, int N, const CutoffProfile& chi = {}) {
    if (N < 0) throw ParameterError("cutoff_high: N must be >= 0");
    SpectralField out = f;
    for (int ki = 0; ki < f.nx(); ++ki) {
        const int k = f.grid->wavenumber(ki);
        const double w = (N == 0) ? (k != 0 ? 1.0 : 0.0) : chi(double(k) / N);
        for (int j = 0; j < f.ny(); ++j) out.at(ki, j) *= w;
    }
    return out;
}

/// P_{<=N} = identity - P_{>=N-1}.
inline SpectralField cutoff_low(const SpectralField& f, int N, const CutoffProfile& chi = {}) {
    if (N < 1) throw ParameterError("cutoff_low: N must be >= 1");
    return f - cutoff_high(f, N - 1, chi);
}

/// Frequency threshold N(eps) = floor(eps^{-2/(2-sigma)}).
inline int n_of_eps(double eps, double sigma) {
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("n_of_eps: eps must lie in (0,1)");
    const double v = std::pow(eps, -2.0 / (2.0 - sigma));
    return static_cast<int>(std::floor(v + 1e-9));
}

}  // namespace hydrolim
