#pragma once

#include <map>
#include <random>

#include "hydrolim/gevrey.hpp"

namespace hydrolim {

/// Sampled numerical verification of the section-2 inequalities on random
/// trigonometric polynomials. The paper's constants are non-constructive,
/// so each check reports the empirical max ratio for regression pinning
/// instead of asserting a fixed C.
struct LemmaReport {
    std::string lemma;
    std::map<std::string, double> params;
    int trials = 0;
    uint64_t seed = 0;
    double max_ratio = 0.0;
};

namespace lemmas {

/// x-only function as modes c(k), k = -K..K at index k+K.
struct TrigPoly {
    int K = 0;
    CVector c;

    explicit TrigPoly(int kmax) : K(kmax), c(2 * kmax + 1, Complex(0.0)) {}
    Complex& at(int k) { return c.at(k + K); }
    /// read access; modes outside the support are zero
    Complex get(int k) const { return (std::abs(k) <= K) ? c[k + K] : Complex(0.0); }
};

inline TrigPoly random_real_poly(int deg, int kmax, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrigPoly f(kmax);
    f.at(0) = Complex(u(rng), 0.0);
    for (int k = 1; k <= deg; ++k) {
        const Complex z(u(rng), u(rng));
        f.at(k) = z;
        f.at(-k) = std::conj(z);
    }
    return f;
}

/// Exact spectral convolution (fg)^(k) = sum_l f(k-l) g(l).
inline TrigPoly convolve(const TrigPoly& f, const TrigPoly& g, int kmax_out) {
    TrigPoly out(kmax_out);
    for (int k = -kmax_out; k <= kmax_out; ++k) {
        Complex s(0.0);
        for (int l = -g.K; l <= g.K; ++l) s += f.get(k - l) * g.get(l);
        out.at(k) = s;
    }
    return out;
}

inline double xnorm(const TrigPoly& f, double r, double tau, double sigma) {
    double s = 0.0;
    for (int k = -f.K; k <= f.K; ++k) {
        const double bk = bracket_k(k);
        s += std::pow(bk, 2.0 * r) * std::exp(2.0 * tau * std::pow(bk, sigma)) * std::norm(f.get(k));
    }
    return std::sqrt(s);
}

inline double hnorm(const TrigPoly& f, double r) { return xnorm(f, r, 0.0, 1.0); }

}  // namespace lemmas

/// Lemma "product in Gevrey": |fg|_{X^r} <= C |f|_{X^s}|g|_{X^r} + C |f|_{X^r}|g|_{X^s}.
inline LemmaReport check_product_inequality(double r, double s, int trials, uint64_t seed = 20240901,
                                            double sigma = 1.0, double tau = 0.3, int deg = 8) {
    if (r < 0.0 || s <= 0.5) throw ParameterError("check_product_inequality: need r >= 0, s > 1/2");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        auto f = lemmas::random_real_poly(deg, deg, rng);
        auto g = lemmas::random_real_poly(deg, deg, rng);
        auto fg = lemmas::convolve(f, g, 2 * deg);
        const double lhs = lemmas::xnorm(fg, r, tau, sigma);
        const double rhs = lemmas::xnorm(f, s, tau, sigma) * lemmas::xnorm(g, r, tau, sigma) +
                           lemmas::xnorm(f, r, tau, sigma) * lemmas::xnorm(g, s, tau, sigma);
        worst = std::max(worst, rhs > 0.0 ? lhs / rhs : 0.0);
    }
    return LemmaReport{"product-gevrey",
                       {{"r", r}, {"s", s}, {"sigma", sigma}, {"tau", tau}, {"deg", double(deg)}},
                       trials, seed, worst};
}

/// The three commutator forms of the section-2 lemmas, sampled together:
///  (a) ||[<D>^r, f] dx g||_{L2}   vs  ||f||_{H^{s1}}||g||_{H^r} + ||f||_{H^{r+1-d}}||g||_{H^{s+d}}
///  (b) ||[P_{>=N}, f] dx g||_{H^r} vs ||f||_{H^{s1}}||P_{>=N/2} g||_{H^r} + ||f||_{H^{r+1-d}}||g||_{H^{s+d}}
///  (c) ||(f dx g)_Phi - f dx g_Phi||_{H^r} vs |f|_{X^{s1}}|g|_{X^{r+sigma}} + |f|_{X^{r+1-d}}|g|_{X^{s+d}}
struct CommutatorReports {
    LemmaReport bracket_d;   // (a)
    LemmaReport bracket_pn;  // (b)
    LemmaReport multiplier;  // (c)
};

inline CommutatorReports check_commutator_inequalities(double r, double s1, double s, double delta, int trials,
                                                       uint64_t seed = 20240902, double sigma = 1.0,
                                                       double tau = 0.3, int N = 4, int deg = 8) {
    if (r < 0.0 || s1 <= 1.5 || s <= 0.5 || delta < 0.0 || delta > 1.0)
        throw ParameterError("check_commutator_inequalities: parameter ranges of the lemmas violated");
    std::mt19937_64 rng(seed);
    CutoffProfile chi;
    double wa = 0.0, wb = 0.0, wc = 0.0;
    for (int t = 0; t < trials; ++t) {
        auto f = lemmas::random_real_poly(deg, deg, rng);
        auto g = lemmas::random_real_poly(deg, deg, rng);
        const int kout = 2 * deg;

        lemmas::TrigPoly ca(kout), cb(kout), cc(kout), png(kout);
        for (int k = -kout; k <= kout; ++k) {
            Complex sa(0.0), sb(0.0), sc(0.0);
            for (int l = -deg; l <= deg; ++l) {
                const Complex term = f.get(k - l) * Complex(0.0, double(l)) * g.get(l);
                sa += (std::pow(bracket_k(k), r) - std::pow(bracket_k(l), r)) * term;
                sb += (chi(double(k) / N) - chi(double(l) / N)) * term;
                sc += (std::exp(tau * std::pow(bracket_k(k), sigma)) -
                       std::exp(tau * std::pow(bracket_k(l), sigma))) *
                      term;
            }
            ca.at(k) = sa;
            cb.at(k) = sb;
            cc.at(k) = sc;
        }
        for (int k = -deg; k <= deg; ++k) png.at(k) = chi(2.0 * k / N) * g.get(k);

        const double rhs_sob = lemmas::hnorm(f, s1) * lemmas::hnorm(g, r) +
                               lemmas::hnorm(f, r + 1.0 - delta) * lemmas::hnorm(g, s + delta);
        if (rhs_sob > 0.0) wa = std::max(wa, lemmas::hnorm(ca, 0.0) / rhs_sob);

        const double rhs_pn = lemmas::hnorm(f, s1) * lemmas::hnorm(png, r) +
                              lemmas::hnorm(f, r + 1.0 - delta) * lemmas::hnorm(g, s + delta);
        if (rhs_pn > 0.0) wb = std::max(wb, lemmas::hnorm(cb, r) / rhs_pn);

        const double rhs_mult =
            lemmas::xnorm(f, s1, tau, sigma) * lemmas::xnorm(g, r + sigma, tau, sigma) +
            lemmas::xnorm(f, r + 1.0 - delta, tau, sigma) * lemmas::xnorm(g, s + delta, tau, sigma);
        if (rhs_mult > 0.0) wc = std::max(wc, lemmas::hnorm(cc, r) / rhs_mult);
    }
    std::map<std::string, double> p{{"r", r},      {"s1", s1},       {"s", s},   {"delta", delta},
                                    {"sigma", sigma}, {"tau", tau},  {"N", double(N)}, {"deg", double(deg)}};
    return CommutatorReports{LemmaReport{"commutator-sobolev", p, trials, seed, wa},
                             LemmaReport{"commutator-cutoff", p, trials, seed, wb},
                             LemmaReport{"commutator-multiplier", p, trials, seed, wc}};
}

/// Exhaustive subadditivity Phi(t,k) <= Phi(t,k-l) + Phi(t,l) on the mode
/// square |k|,|l| <= kmax and a time grid; returns the worst violation
/// (negative slack means a violation).
inline double subadditivity_worst_slack(const GevreyParams& p, int kmax, int ntimes = 5, double tmax = 1.0) {
    double worst = std::numeric_limits<double>::infinity();
    for (int it = 0; it < ntimes; ++it) {
        const double t = tmax * it / std::max(1, ntimes - 1);
        for (int k = -kmax; k <= kmax; ++k)
            for (int l = -kmax; l <= kmax; ++l) {
                const double slack = phi(t, k - l, p) + phi(t, l, p) - phi(t, k, p);
                worst = std::min(worst, slack);
            }
    }
    return worst;
}

}  // namespace hydrolim
