#pragma once

#include "hydrolim/scheme.hpp"

namespace hydrolim {

/// State of the scaled anisotropic Navier-Stokes solve at fixed eps:
/// omega = dy u - eps^2 dx v, Delta_eps psi = omega, u = dy psi (+ mean),
/// v = -dx psi, all no-slip enforced through the influence-matrix closure.
struct ANSState {
    SpectralField omega, psi, u, v;
    double epsilon = 0.0;
    double eta = 1.0;
    double t = 0.0;
};

struct EnergyRecord {
    double t = 0.0;
    double kinetic = 0.0;          ///< (1/2)||(u, eps v)||^2
    double dissipation_mid = 0.0;  ///< dissipation at the CN midpoint of the last step
};

struct AnsRun {
    std::vector<ANSState> trajectory;
    std::vector<EnergyRecord> energy;
    Outcome outcome = Outcome::Completed;
    std::string message;
};

class AnsSolver {
  public:
    AnsSolver(GridPtr g, double epsilon, double dt, double eta = 1.0, double filter_alpha = 36.0,
              double mean_px = 0.0)
        : core_(std::move(g), SchemeConfig{epsilon, eta, dt, filter_alpha, 16, 0.9, mean_px}) {
        if (!(epsilon > 0.0)) throw ParameterError("AnsSolver: epsilon must be in (0,1)");
    }

    StripFlowSolver& core() { return core_; }
    const GridPtr& grid() const { return core_.grid(); }
    double epsilon() const { return core_.config().eps; }

    ANSState wrap(const FlowFields& f) const {
        return ANSState{f.omega, f.psi, f.u, f.v, core_.config().eps, core_.config().eta, f.t};
    }

    FlowFields initial_state(const SpectralField& u0, const SpectralField& v0) const {
        return core_.initial_state(u0, v0);
    }

    /// Advance to T. The observer (optional) sees every accepted state in
    /// order, including t=0; snapshots are stored every store_every steps.
    /// On no-forcing runs an energy increase beyond energy_growth_tol per
    /// step aborts with a typed instability outcome.
    AnsRun solve(const SpectralField& u0, const SpectralField& v0, double T,
                 const std::function<void(const ANSState&, int)>& observer = {}, int store_every = 1,
                 double energy_growth_tol = 1e-8, bool has_forcing = false) {
        AnsRun run;
        core_.reset_history();
        FlowFields f = initial_state(u0, v0);
        const int nsteps = static_cast<int>(std::llround(T / core_.config().dt));
        run.trajectory.push_back(wrap(f));
        run.energy.push_back({0.0, core_.kinetic_energy(f), 0.0});
        if (observer) observer(run.trajectory.back(), 0);
        double prev_e = run.energy.back().kinetic;
        for (int n = 1; n <= nsteps; ++n) {
            FlowFields next;
            try {
                next = core_.step(f);
            } catch (const NumericalError& e) {
                run.outcome = std::string(e.what()).find("CFL") != std::string::npos
                                  ? Outcome::CflViolation
                                  : Outcome::SingularClosure;
                run.message = e.what();
                return run;
            }
            SpectralField um = 0.5 * (f.u + next.u);
            SpectralField vm = 0.5 * (f.v + next.v);
            const double e_now = core_.kinetic_energy(next);
            run.energy.push_back({next.t, e_now, core_.dissipation(um, vm)});
            f = std::move(next);
            // the mean pressure gradient does work on the flow, so the
            // monotone-energy detector only applies to the periodic-pressure
            // no-forcing system
            if (!has_forcing && core_.config().mean_px == 0.0 && e_now > prev_e + energy_growth_tol) {
                run.outcome = Outcome::NormBlowup;
                run.message = "kinetic energy grew by " + std::to_string(e_now - prev_e) +
                              " in one step at t = " + std::to_string(f.t);
                return run;
            }
            prev_e = e_now;
            if (n % store_every == 0 || n == nsteps) run.trajectory.push_back(wrap(f));
            if (observer) observer(wrap(f), n);
        }
        return run;
    }

  private:
    StripFlowSolver core_;
};

}  // namespace hydrolim
