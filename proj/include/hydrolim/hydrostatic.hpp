#pragma once

#include "hydrolim/gevrey.hpp"
#include "hydrolim/scheme.hpp"

namespace hydrolim {

/// State of the hydrostatic Navier-Stokes/Prandtl solve. v is diagnostic
/// (v = -int_0^y dx u), px_hat is the per-mode constant pressure gradient
/// recovered from the discrete momentum balance.
struct HydroState {
    SpectralField u, v;
    CVector px_hat;
    double t = 0.0;
};

struct MonitorRow {
    double t = 0.0;
    double tau = 0.0;
    double min_dyy_u = 0.0;
    double xnorm_level1 = 0.0;  ///< ||dy u||_{X^{N0-1}}
    double xnorm_level2 = 0.0;  ///< ||dy^3 u||_{X^{N0-5}}
};

struct MonitorConfig {
    GevreyParams gevrey;
    int N0 = 10;
    double delta0 = 0.2;
    double blowup_factor = 1e3;
};

struct HydroRun {
    std::vector<HydroState> trajectory;  ///< every store_every-th step, always incl. t=0 and the end
    std::vector<MonitorRow> monitors;
    Outcome outcome = Outcome::Completed;
    std::string message;
};

/// Time integration of the hydrostatic system. Internally this is the eps=0
/// specialization of the anisotropic vorticity scheme, so the pair of
/// solvers shares every discretization artifact (see ledger); the contract
/// here is unchanged: Dirichlet walls, exact per-mode vertical-mean
/// constraint, CN-AB2 with dealiased advection and the exponential filter.
class HydroSolver {
  public:
    HydroSolver(GridPtr g, double dt, double filter_alpha = 36.0, double mean_px = 0.0)
        : core_(std::move(g), SchemeConfig{0.0, 1.0, dt, filter_alpha, 16, 0.9, mean_px}) {}

    StripFlowSolver& core() { return core_; }
    const GridPtr& grid() const { return core_.grid(); }

    HydroState wrap(const FlowFields& f) const {
        HydroState s;
        s.u = f.u;
        s.v = f.v;
        s.t = f.t;
        s.px_hat = pressure_gradient(f);
        return s;
    }

    FlowFields initial_state(const SpectralField& u0) const {
        return core_.initial_state(u0, SpectralField(core_.grid()));
    }

    MonitorRow monitor(const FlowFields& f, const MonitorConfig& mc) const {
        MonitorRow row;
        row.t = f.t;
        row.tau = mc.gevrey.tau(f.t);
        NodalField d2 = inverse_transform_x(apply_y_matrix(f.u, core_.grid()->d2y_matrix()));
        double mn = d2.v[0];
        for (double v : d2.v) mn = std::min(mn, v);
        row.min_dyy_u = mn;
        row.xnorm_level1 = gevrey_norm(ddy(f.u), double(mc.N0 - 1), f.t, mc.gevrey);
        row.xnorm_level2 =
            gevrey_norm(apply_y_matrix(f.u, core_.grid()->d3y_matrix()), double(mc.N0 - 5), f.t, mc.gevrey);
        return row;
    }

    /// Advance from u0 to T recording monitors every step; aborts with a
    /// typed outcome on convexity breakdown (min dy^2 u <= delta0), norm
    /// blow-up, or a CFL/closure failure inside the stepper.
    HydroRun solve(const SpectralField& u0, double T, const MonitorConfig& mc, int store_every = 1) {
        HydroRun run;
        core_.reset_history();
        FlowFields f = initial_state(u0);
        const int nsteps = static_cast<int>(std::llround(T / core_.config().dt));
        MonitorRow first = monitor(f, mc);
        run.monitors.push_back(first);
        run.trajectory.push_back(wrap(f));
        const double norm0 = std::max(first.xnorm_level1, 1.0);
        for (int n = 1; n <= nsteps; ++n) {
            try {
                f = core_.step(f);
            } catch (const NumericalError& e) {
                run.outcome = std::string(e.what()).find("CFL") != std::string::npos
                                  ? Outcome::CflViolation
                                  : Outcome::SingularClosure;
                run.message = e.what();
                return run;
            }
            MonitorRow row = monitor(f, mc);
            run.monitors.push_back(row);
            if (n % store_every == 0 || n == nsteps) run.trajectory.push_back(wrap(f));
            if (row.min_dyy_u <= mc.delta0) {
                run.outcome = Outcome::ConvexityBreakdown;
                run.message = "convexity breakdown: min dy^2 u = " + std::to_string(row.min_dyy_u) +
                              " <= delta0 = " + std::to_string(mc.delta0) + " at t = " + std::to_string(f.t);
                return run;
            }
            if (row.xnorm_level1 > mc.blowup_factor * norm0) {
                run.outcome = Outcome::NormBlowup;
                run.message = "Gevrey norm grew beyond the blow-up factor at t = " + std::to_string(f.t);
                return run;
            }
        }
        return run;
    }

  private:
    StripFlowSolver core_;

    /// dx p_hat(k) for k != 0 from the vertical mean of the momentum
    /// equation (so that d/dt int u dy = 0); the k = 0 entry carries the
    /// mean gradient c(t) of the Poiseuille balance (0 when switched off).
    CVector pressure_gradient(const FlowFields& f) const {
        const Grid& g = *core_.grid();
        NodalField un = inverse_transform_x(f.u);
        NodalField vn = inverse_transform_x(f.v);
        NodalField ux = inverse_transform_x(ddx(f.u));
        NodalField uy = inverse_transform_x(ddy(f.u));
        NodalField adv(core_.grid());
        for (size_t i = 0; i < adv.v.size(); ++i) adv.v[i] = un.v[i] * ux.v[i] + vn.v[i] * uy.v[i];
        SpectralField advh = dealias(transform_x(core_.grid(), adv));
        SpectralField lap = apply_y_matrix(f.u, g.d2y_matrix());
        CVector t1 = integrate_y(advh, 0.0, 1.0);
        CVector t2 = integrate_y(lap, 0.0, 1.0);
        CVector px(g.nx(), Complex(0.0));
        for (int ki = 0; ki < g.nx(); ++ki)
            if (g.wavenumber(ki) != 0) px[ki] = t2[ki] - t1[ki];
        px[g.row_of_k(0)] = Complex(core_.mean_pressure_value(), 0.0);
        return px;
    }
};

}  // namespace hydrolim
