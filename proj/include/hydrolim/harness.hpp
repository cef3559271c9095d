#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "hydrolim/reports.hpp"
#include "hydrolim/snapshot.hpp"

namespace hydrolim {

inline int worker_count(size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("HYDROLIM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min<unsigned>(n ? n : 1, static_cast<unsigned>(cap));
    }
    if (n == 0) n = 1;
    return static_cast<int>(std::min<size_t>(n, jobs));
}

/// Least-squares fit of log(error) against log(eps); the Theorem 1.2 shadow.
struct RateFit {
    RVector epsilons, errors_l2, errors_linf;
    double slope_l2 = 0.0, intercept_l2 = 0.0, r2_l2 = 0.0;
    double slope_linf = 0.0, intercept_linf = 0.0, r2_linf = 0.0;
    bool pass = false;
};

namespace detail {

struct LineFit {
    double slope, intercept, r2;
};

inline LineFit least_squares_loglog(const RVector& xs, const RVector& ys) {
    const size_t n = xs.size();
    RVector lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(std::max(ys[i], 1e-300));
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += sq(lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += sq(ly[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ssres = 0.0;
    for (size_t i = 0; i < n; ++i) ssres += sq(ly[i] - (intercept + slope * lx[i]));
    return {slope, intercept, syy > 0.0 ? 1.0 - ssres / syy : 1.0};
}

}  // namespace detail

inline RateFit fit_rate(const RVector& epsilons, const RVector& errors_l2, const RVector& errors_linf,
                        double threshold_l2 = 1.8, double threshold_linf = 1.7) {
    if (epsilons.size() < 3) throw ParameterError("fit_rate: need at least 3 epsilon points");
    RateFit fit;
    fit.epsilons = epsilons;
    fit.errors_l2 = errors_l2;
    fit.errors_linf = errors_linf;
    auto l2 = detail::least_squares_loglog(epsilons, errors_l2);
    auto li = detail::least_squares_loglog(epsilons, errors_linf);
    fit.slope_l2 = l2.slope;
    fit.intercept_l2 = l2.intercept;
    fit.r2_l2 = l2.r2;
    fit.slope_linf = li.slope;
    fit.intercept_linf = li.intercept;
    fit.r2_linf = li.r2;
    fit.pass = fit.slope_l2 >= threshold_l2 && fit.slope_linf >= threshold_linf;
    return fit;
}

struct PipelineResult {
    HydroRun hydro;
    std::vector<EpsReport> eps_reports;
    SpectralField u0;  ///< corrected initial data actually used
    int com2_iterations = 0;
};

/// Full experiment: one hydrostatic solve, then per-epsilon anisotropic
/// solves with the error analysis, boundary-layer lifts, energy functionals
/// and bootstrap monitor evaluated along the way.
inline PipelineResult run_pipeline(const RunConfig& cfg, const std::string& out_dir = "",
                                   bool write_outputs = false) {
    cfg.validate();
    GridPtr grid = make_grid(cfg.nx, cfg.ny, cfg.dealias_fraction);
    auto [u0_raw, v0_raw] = make_family(cfg.data, grid);
    Com2Result com2 = correct_com2(u0_raw, cfg.data);
    const SpectralField u0 = com2.u0;
    const SpectralField v0 = family_velocity(u0);

    PipelineResult result;
    result.u0 = u0;
    result.com2_iterations = com2.iterations;

    // both solvers share the same constant Poiseuille gradient, so the k=0
    // pressure terms cancel exactly in the error fields
    const double mean_px = poiseuille_gradient(u0);
    MonitorConfig mc{cfg.gevrey, cfg.data.N0, cfg.data.delta0, 1e6};
    HydroSolver hydro(grid, cfg.dt, cfg.filter_alpha, mean_px);
    result.hydro = hydro.solve(u0, cfg.T, mc, 1);
    if (result.hydro.outcome != Outcome::Completed) return result;
    const std::vector<HydroState>& htraj = result.hydro.trajectory;

    std::vector<HydroFields> hfields(htraj.size());
    // heavier hydrostatic derivatives only where reports sample them
    auto hydro_at = [&](size_t n) -> const HydroFields& {
        if (hfields[n].u.grid == nullptr) hfields[n] = hydro_fields(htraj[n]);
        return hfields[n];
    };

    if (write_outputs && !out_dir.empty()) std::filesystem::create_directories(out_dir);
    result.eps_reports.resize(cfg.epsilons.size());
    std::atomic<size_t> next{0};
    std::mutex hf_mutex;
    auto work = [&]() {
        for (;;) {
            const size_t idx = next.fetch_add(1);
            if (idx >= cfg.epsilons.size()) return;
            const double eps = cfg.epsilons[idx];
            EpsReport rep;
            rep.epsilon = eps;
            AnsSolver ans(grid, eps, cfg.dt, 1.0, cfg.filter_alpha, mean_px);
            LiftSolver lift0(0, grid, eps, cfg.dt, cfg.L_lift, cfg.lift_nodes);
            LiftSolver lift1(1, grid, eps, cfg.dt, cfg.L_lift, cfg.lift_nodes);
            BootstrapAccumulator boot(cfg.gevrey, cfg.data.N0);
            const double r_level = double(cfg.data.N0 - 7);

            auto observer = [&](const ANSState& st, int n) {
                const HydroState& hyd = htraj[n];
                ErrorState es = build_error_state(st, hyd);
                if (n > 0) {
                    // one-way causal coupling: the lifts absorb dx h^i computed
                    // from the current simulation state
                    SpectralField omega_p = ddy(hyd.u);
                    SpectralField dy_omega_p = ddy(omega_p);
                    SpectralField dxinv = dx_inverse_v(es.uR);
                    SpectralField main_arg = multiply(hyd.u, es.omegaR) + multiply(dxinv, dy_omega_p);
                    CVector h0 = detail::half_kernel_integral(main_arg, eps, kernels::g0);
                    CVector h1 = detail::half_kernel_integral(main_arg, eps, kernels::g1);
                    lift0.advance(h0);
                    lift1.advance(h1);
                    lift0.maybe_extend();
                    lift1.maybe_extend();
                }
                es.omega_bl = lift_on_strip(lift0.field()) + lift_on_strip(lift1.field());
                es.omega_in = es.omegaR - es.omega_bl;
                boot.add(es, cfg.dt);

                SpectralField evR = es.vR;
                evR *= eps;
                const double l2 = std::sqrt(sq(l2_norm(es.uR)) + sq(l2_norm(evR)));
                const double li = std::max(linf_norm(es.uR), linf_norm(evR));
                rep.sup_L2 = std::max(rep.sup_L2, l2);
                rep.sup_Linf = std::max(rep.sup_Linf, li);

                if (n % cfg.report_every == 0) {
                    const HydroFields& hp = [&]() -> const HydroFields& {
                        std::lock_guard<std::mutex> lock(hf_mutex);
                        return hydro_at(n);
                    }();
                    ErrorRecord rec;
                    rec.t = st.t;
                    rec.L2_error = l2;
                    rec.Linf_error = li;
                    rec.energy = energy_functionals(es, cfg.gevrey, cfg.data.N0, cfg.A_weight);
                    rec.bootstrap_ratio = boot.ratio(eps);
                    BoundaryData hb = boundary_data_h(es, hp, eps, Side::Bottom);
                    BoundaryData ht = boundary_data_h(es, hp, eps, Side::Top);
                    rec.h0_norm = gevrey_trace_norm(hb.h, *grid, r_level, st.t, cfg.gevrey);
                    rec.h1_norm = gevrey_trace_norm(ht.h, *grid, r_level, st.t, cfg.gevrey);
                    rec.h0l_norm = gevrey_trace_norm(hb.h_l, *grid, r_level, st.t, cfg.gevrey);
                    rec.h1l_norm = gevrey_trace_norm(ht.h_l, *grid, r_level, st.t, cfg.gevrey);
                    BoundaryResidual br = vorticity_boundary_residual(es, hp, eps);
                    rec.boundary_residual = br.max_residual();
                    rec.boundary_lhs_scale = br.lhs_scale;
                    rep.records.push_back(rec);
                }
            };

            AnsRun run = ans.solve(u0, v0, cfg.T, observer, cfg.report_every);
            rep.outcome = run.outcome;
            rep.message = run.message;
            rep.bootstrap_value = boot.value();
            rep.bootstrap_ratio = boot.ratio(eps);
            result.eps_reports[idx] = std::move(rep);

            if (write_outputs && !out_dir.empty() && !run.trajectory.empty()) {
                const auto& last = run.trajectory.back();
                snapshot::write(out_dir + "/u_eps" + std::to_string(eps) + ".hlim", last.u, last.t);
            }
        }
    };

    const int nworkers = worker_count(cfg.epsilons.size());
    std::vector<std::thread> pool;
    for (int i = 1; i < nworkers; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    if (write_outputs && !out_dir.empty()) {
        reports::write_monitor_csv(out_dir + "/hydro_monitor.csv", result.hydro.monitors);
        const auto& hl = result.hydro.trajectory.back();
        snapshot::write(out_dir + "/u_hydro.hlim", hl.u, hl.t);
        for (const auto& rep : result.eps_reports)
            reports::write_json(out_dir + "/report_eps" + std::to_string(rep.epsilon) + ".json",
                                reports::to_json(rep, cfg.config_hash));
    }
    return result;
}

}  // namespace hydrolim
