#include <catch2/catch_amalgamated.hpp>

#include "hydrolim/error_analysis.hpp"
#include "hydrolim/initial_data.hpp"

using namespace hydrolim;

namespace {

ANSState fake_ans(const GridPtr& g, const SpectralField& u, const SpectralField& v, double eps,
                  double t = 0.0) {
    SpectralField dv = ddx(v);
    dv *= sq(eps);
    return ANSState{ddy(u) - dv, SpectralField(g), u, v, eps, 1.0, t};
}

HydroState fake_hydro(const SpectralField& u, const SpectralField& v, double t = 0.0) {
    return HydroState{u, v, CVector(u.nx(), Complex(0.0)), t};
}

SpectralField from_nodal(const GridPtr& g, const std::function<double(double, double)>& f) {
    NodalField n(g);
    for (int m = 0; m < g->nx(); ++m)
        for (int j = 0; j < g->ny(); ++j) n.at(m, j) = f(g->x()[m], g->y()[j]);
    return transform_x(g, n);
}

}  // namespace

TEST_CASE("identical inputs produce a zero error state") {
    GridPtr g = make_grid(16, 24);
    auto [u0, v0] = make_family(DataSpec{1.0, 0.1, 0.2, 10, 0.0}, g);
    ErrorState es = build_error_state(fake_ans(g, u0, v0, 0.1), fake_hydro(u0, v0));
    CHECK(es.uR.max_abs() == 0.0);
    CHECK(es.vR.max_abs() == 0.0);
    CHECK(es.omegaR.max_abs() == 0.0);
    CHECK(es.omega_in.max_abs() == 0.0);
}

TEST_CASE("time mismatch is a dimension error") {
    GridPtr g = make_grid(8, 16);
    SpectralField z(g);
    CHECK_THROWS_AS(build_error_state(fake_ans(g, z, z, 0.1, 0.5), fake_hydro(z, z, 0.4)),
                    DimensionError);
}

TEST_CASE("omega^R identity against independent recomputation") {
    GridPtr g = make_grid(16, 24);
    SpectralField ue = from_nodal(g, [](double x, double y) { return std::sin(x) * y * (1 - y); });
    SpectralField ve = from_nodal(g, [](double x, double y) { return std::cos(x) * y * y * (1 - y); });
    SpectralField up = from_nodal(g, [](double, double y) { return y * y - y; });
    const double eps = 0.2;
    ErrorState es = build_error_state(fake_ans(g, ue, ve, eps), fake_hydro(up, SpectralField(g)));
    SpectralField dv = ddx(es.vR);
    dv *= sq(eps);
    CHECK((es.omegaR - (ddy(es.uR) - dv)).max_abs() <= 1e-10);
    CHECK((es.omega_in + es.omega_bl - es.omegaR).max_abs() == 0.0);
}

TEST_CASE("dx_inverse_v: zero, constant, and derivative recovery") {
    GridPtr g = make_grid(8, 33);  // odd ny: y = 1/2 is a node
    CHECK(dx_inverse_v(SpectralField(g)).max_abs() == 0.0);

    SpectralField one = from_nodal(g, [](double, double) { return 1.0; });
    SpectralField r = dx_inverse_v(one);
    const int k0 = g->row_of_k(0);
    for (int j = 0; j < g->ny(); ++j) {
        const double y = g->y()[j];
        const double want = (y <= 0.5) ? -y : (1.0 - y);
        CHECK(std::abs(r.at(k0, j) - want) <= 1e-13);
    }
    CVector jump = dx_inverse_v_jump(one);
    CHECK(std::abs(jump[k0] - 1.0) < 1e-13);  // the jump equals the vertical mean

    SpectralField u = from_nodal(g, [](double x, double y) { return std::cos(x) * std::sin(PI * y); });
    SpectralField dxi = dx_inverse_v(u);
    // dy of the result = -u on each half: the two branches are -A and
    // A(1) - A with A the (smooth) cumulative integral, so the fundamental
    // theorem check is ddy(A) = u plus the branch values
    SpectralField cum = antiderivative_y(u);
    CHECK((ddy(cum) - u).max_abs() <= 1e-9 * std::max(1.0, u.max_abs()));
    CVector full = integrate_y(u, 0.0, 1.0);
    for (int ki = 0; ki < g->nx(); ++ki)
        for (int j = 0; j < g->ny(); ++j) {
            const Complex want =
                (g->y()[j] <= 0.5) ? -cum.at(ki, j) : (full[ki] - cum.at(ki, j));
            CHECK(std::abs(dxi.at(ki, j) - want) <= 1e-13);
        }
}

TEST_CASE("forcing terms: zero error, x-independent profile, recomposition") {
    GridPtr g = make_grid(16, 24);
    auto [u0, v0] = make_family(DataSpec{1.0, 0.1, 0.2, 10, 0.0}, g);
    HydroState hyd = fake_hydro(u0, v0);
    HydroFields hp = hydro_fields(hyd);
    const double eps = 0.1;

    ErrorState zero_es = build_error_state(fake_ans(g, u0, v0, eps), hyd);
    ForcingTerms ft = forcing_terms(hp, zero_es, eps);
    CHECK(ft.f1.max_abs() == 0.0);
    CHECK(ft.f3.max_abs() <= 1e-14);
    SpectralField want_f = ft.f2;
    want_f *= sq(eps);  // f reduces to the f2 block alone
    CHECK((ft.f - want_f).max_abs() <= 1e-14);

    // x-independent u^p: every term of f2 carries an x-derivative
    auto [ua, va] = make_family(DataSpec{1.0, 0.0, 0.2, 10, 0.0}, g);
    HydroFields hpa = hydro_fields(fake_hydro(ua, va));
    ForcingTerms fta = forcing_terms(hpa, zero_es, eps);
    CHECK(fta.f2.max_abs() <= 1e-13);

    // generic recomposition f = f3 + eps^2 (f1 + f2)
    SpectralField ue = from_nodal(g, [](double x, double y) { return std::sin(x) * y * (1 - y); });
    ErrorState es = build_error_state(fake_ans(g, u0 + ue, v0, eps), hyd);
    ForcingTerms ftg = forcing_terms(hp, es, eps);
    SpectralField f12 = ftg.f1 + ftg.f2;
    f12 *= sq(eps);
    CHECK((ftg.f - (ftg.f3 + f12)).max_abs() <= 1e-14);
}

TEST_CASE("nonlinear terms: zero, quadratic homogeneity, convolution check") {
    GridPtr g = make_grid(32, 24);
    auto [u0, v0] = make_family(DataSpec{1.0, 0.1, 0.2, 10, 0.0}, g);
    HydroState hyd = fake_hydro(u0, v0);
    ErrorState zero_es = build_error_state(fake_ans(g, u0, v0, 0.1), hyd);
    NonlinearTerms nt0 = nonlinear_terms(zero_es);
    CHECK(nt0.N_omega.max_abs() == 0.0);
    CHECK(nt0.N_u.max_abs() == 0.0);
    CHECK(nt0.N_v.max_abs() == 0.0);

    // u^R = cos x g(y), v^R from the divergence: quadratic scaling and a
    // direct spectral convolution of the k = 0 and k = 2 outputs
    auto build = [&](double amp) {
        SpectralField ue = from_nodal(g, [amp](double x, double y) {
            return amp * std::cos(x) * y * y * sq(1.0 - y);
        });
        SpectralField ve = family_velocity(ue);
        return build_error_state(fake_ans(g, u0 + ue, v0 + ve, 0.1), hyd);
    };
    ErrorState e1 = build(1.0);
    ErrorState e2 = build(2.0);
    NonlinearTerms n1 = nonlinear_terms(e1);
    NonlinearTerms n2 = nonlinear_terms(e2);
    CHECK((n2.N_u - 4.0 * n1.N_u).max_abs() <= 1e-10);
    CHECK((n2.N_omega - 4.0 * n1.N_omega).max_abs() <= 1e-10);

    // exact convolution of the two-mode data reproduces N_u per mode
    for (int kout : {0, 2}) {
        for (int j = 2; j < g->ny() - 2; j += 5) {
            Complex conv(0.0);
            SpectralField dxu = ddx(e1.uR), dyu = ddy(e1.uR);
            for (int l = -g->nx() / 2; l < g->nx() / 2; ++l) {
                const int kl = kout - l;
                if (std::abs(kl) >= g->nx() / 2) continue;
                conv += e1.uR.at(g->row_of_k(kl), j) * dxu.at(g->row_of_k(l), j) +
                        e1.vR.at(g->row_of_k(kl), j) * dyu.at(g->row_of_k(l), j);
            }
            CHECK(std::abs(n1.N_u.at(g->row_of_k(kout), j) - conv) <= 1e-10);
        }
    }
}

TEST_CASE("boundary data h: zero error leaves only the eps^2 f2 block") {
    GridPtr g = make_grid(16, 32);
    auto [u0, v0] = make_family(DataSpec{1.0, 0.1, 0.2, 10, 0.0}, g);
    HydroFields hp = hydro_fields(fake_hydro(u0, v0));
    const double eps = 0.1;
    ErrorState es = build_error_state(fake_ans(g, u0, v0, eps), fake_hydro(u0, v0));
    BoundaryData bd = boundary_data_h(es, hp, eps, Side::Bottom);
    for (int ki = 0; ki < g->nx(); ++ki) CHECK(std::abs(bd.h[ki]) <= 1e-14);
    // h_l = (1/2) int G0 (eps^2 f2): compare against the direct assembly
    ForcingTerms ft = forcing_terms(hp, es, eps);
    SpectralField arg = ft.f2;
    arg *= sq(eps);
    CVector want = detail::half_kernel_integral(arg, eps, kernels::g0);
    for (int ki = 0; ki < g->nx(); ++ki) CHECK(std::abs(bd.h_l[ki] - want[ki]) <= 1e-13);
}

TEST_CASE("boundary data h: independent fine quadrature oracle") {
    GridPtr g = make_grid(16, 32);
    SpectralField up = from_nodal(g, [](double, double y) { return y * y - y; });
    HydroFields hp = hydro_fields(fake_hydro(up, SpectralField(g)));
    const double eps = 0.1;
    // synthetic omega^R = sin(pi y) e^{ix} built from u^R with that vorticity:
    // it is enough to check the defining integral of h^0 for the main term,
    // so place the state directly
    SpectralField ue = from_nodal(g, [](double x, double y) { return std::cos(x) * std::sin(PI * y); });
    ErrorState es;
    es.epsilon = eps;
    es.t = 0.0;
    es.uR = SpectralField(g);
    es.vR = SpectralField(g);
    es.omegaR = ue;  // the prescribed omega^R
    es.omega_bl = SpectralField(g);
    es.omega_in = es.omegaR;
    BoundaryData bd = boundary_data_h(es, hp, eps, Side::Bottom);

    // oracle: (1/2) int_0^1 G0(k,y) * F(u^p om^R)(k,y) dy on a fine midpoint grid
    const int k = 1;
    const double a = eps * k;
    const int nq = 20000;
    Complex oracle(0.0);
    for (int i = 0; i < nq; ++i) {
        const double y = (i + 0.5) / nq;
        const double up_y = y * y - y;
        const Complex om_hat(0.5 * std::sin(PI * y), 0.0);  // cos x -> 1/2 at k = +-1
        oracle += 0.5 * kernels::g0(a, y) * up_y * om_hat / double(nq);
    }
    CHECK(std::abs(bd.h[g->row_of_k(k)] - oracle) <= 1e-9);
}

TEST_CASE("boundary data symmetry under y -> 1-y") {
    GridPtr g = make_grid(16, 33);
    SpectralField up = from_nodal(g, [](double, double y) { return y * y - y; });  // symmetric
    HydroFields hp = hydro_fields(fake_hydro(up, SpectralField(g)));
    const double eps = 0.15;
    SpectralField om = from_nodal(g, [](double x, double y) { return std::cos(x) * std::sin(PI * y); });
    ErrorState es;
    es.epsilon = eps;
    es.uR = SpectralField(g);
    es.vR = SpectralField(g);
    es.omegaR = om;
    es.omega_bl = SpectralField(g);
    es.omega_in = om;
    BoundaryData b0 = boundary_data_h(es, hp, eps, Side::Bottom);
    BoundaryData b1 = boundary_data_h(es, hp, eps, Side::Top);
    for (int ki = 0; ki < g->nx(); ++ki)
        CHECK(std::abs(std::abs(b0.h[ki]) - std::abs(b1.h[ki])) <= 1e-12);
    // numerical reflection identity G1(k,y) = -G0(k,1-y)
    for (double a : {0.1, 1.0, 9.0})
        for (double y : {0.0, 0.3, 0.8, 1.0})
            CHECK(std::abs(kernels::g1(a, y) + kernels::g0(a, 1.0 - y)) <= 1e-13);
}

TEST_CASE("energy functionals: zero state, A = 0 reduction, G lower bound") {
    GridPtr g = make_grid(16, 24);
    GevreyParams gp{1.0, 0.5, 4.0};
    ErrorState zero;
    zero.epsilon = 0.1;
    zero.t = 0.0;
    zero.uR = SpectralField(g);
    zero.vR = SpectralField(g);
    zero.omegaR = SpectralField(g);
    zero.omega_bl = SpectralField(g);
    zero.omega_in = SpectralField(g);
    EnergyTriple z = energy_functionals(zero, gp, 10, 1.0);
    CHECK(z.E == 0.0);
    CHECK(z.G == 0.0);
    CHECK(z.D == 0.0);

    ErrorState es = zero;
    es.uR = from_nodal(g, [](double x, double y) { return std::sin(2 * x) * std::sin(PI * y); });
    es.vR = from_nodal(g, [](double x, double y) { return std::cos(3 * x) * y * (1 - y); });
    SpectralField dv = ddx(es.vR);
    dv *= sq(es.epsilon);
    es.omegaR = ddy(es.uR) - dv;
    es.omega_in = es.omegaR;
    EnergyTriple e0 = energy_functionals(es, gp, 10, 0.0);
    const double r = 3.0;  // N0 - 7
    SpectralField evR = es.vR;
    evR *= es.epsilon;
    const int Ne = n_of_eps(es.epsilon, gp.sigma);
    const double want_e = sq(gevrey_norm(es.omega_in, r, es.t, gp)) +
                          sq(gevrey_norm(cutoff_high(es.uR, Ne), r + 1.0 - gp.sigma, es.t, gp)) +
                          sq(gevrey_norm(cutoff_high(evR, Ne), r + 1.0 - gp.sigma, es.t, gp));
    CHECK(std::abs(e0.E - want_e) <= 1e-12 * std::max(1.0, want_e));

    EnergyTriple e1 = energy_functionals(es, gp, 10, 2.5);
    CHECK(e1.G >= sq(gevrey_norm(es.omega_in, r + gp.sigma / 2.0, es.t, gp)) - 1e-14);
    CHECK(std::abs(e1.E - (e1.E_in + e1.E_hiA + e1.E_hi)) <= 1e-12 * std::max(1.0, e1.E));
}

TEST_CASE("phi-weight contraction: ||phi om|| <= ||om||/4 in X^r") {
    GridPtr g = make_grid(16, 24);
    GevreyParams gp{1.0, 0.4, 2.0};
    SpectralField om = from_nodal(g, [](double x, double y) {
        return std::cos(2 * x) * std::exp(-3.0 * y) + std::sin(x) * std::sin(2 * PI * y);
    });
    NodalField phiw = inverse_transform_x(om);
    for (int m = 0; m < g->nx(); ++m)
        for (int j = 0; j < g->ny(); ++j) phiw.at(m, j) *= g->y()[j] * (1.0 - g->y()[j]);
    SpectralField phom = transform_x(g, phiw);
    CHECK(gevrey_norm(phom, 2.0, 0.1, gp) <= 0.25 * gevrey_norm(om, 2.0, 0.1, gp) + 1e-14);
}

TEST_CASE("bootstrap accumulator: zero state gives ratio zero and integrals add up") {
    GridPtr g = make_grid(8, 16);
    GevreyParams gp{1.0, 0.5, 4.0};
    BootstrapAccumulator acc(gp, 10);
    ErrorState zero;
    zero.epsilon = 0.1;
    zero.uR = SpectralField(g);
    zero.vR = SpectralField(g);
    zero.omegaR = SpectralField(g);
    zero.omega_bl = SpectralField(g);
    zero.omega_in = SpectralField(g);
    for (int n = 0; n < 5; ++n) {
        zero.t = n * 0.01;
        acc.add(zero, 0.01);
    }
    CHECK(acc.ratio(0.1) == 0.0);

    // nonzero: the time integral of a constant-in-time field is t * value
    BootstrapAccumulator acc2(gp, 10);
    ErrorState es = zero;
    es.omegaR = SpectralField(g);
    for (int j = 0; j < g->ny(); ++j) es.omegaR.at(g->row_of_k(1), j) = Complex(0.01, 0.0);
    GevreyParams frozen{1.0, 1e-300, 1.0};
    BootstrapAccumulator acc3(frozen, 10);
    for (int n = 0; n <= 10; ++n) {
        es.t = n * 0.01;
        acc3.add(es, 0.01);
    }
    SpectralField wx = ddx(es.omegaR);
    wx *= es.epsilon;
    const double diss = sq(gevrey_norm(ddy(es.omegaR), 2.0, 0.0, frozen)) +
                        sq(gevrey_norm(wx, 2.0, 0.0, frozen));
    CHECK(std::abs(acc3.integral_part() - 0.1 * diss) <= 1e-12 * std::max(1.0, diss));
    CHECK(acc3.sup_part() == sq(gevrey_norm(es.omegaR, 2.0, 0.0, frozen)));
}
