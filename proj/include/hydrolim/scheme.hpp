#pragma once

#include <functional>
#include <optional>

#include "hydrolim/elliptic.hpp"

namespace hydrolim {

/// Typed run outcomes; breakdowns are results, not crashes.
enum class Outcome { Completed, ConvexityBreakdown, NormBlowup, CflViolation, SingularClosure };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Completed: return "completed";
        case Outcome::ConvexityBreakdown: return "convexity_breakdown";
        case Outcome::NormBlowup: return "norm_blowup";
        case Outcome::CflViolation: return "cfl_violation";
        case Outcome::SingularClosure: return "singular_closure";
    }
    return "unknown";
}

struct SchemeConfig {
    double eps = 0.0;          ///< 0 selects the hydrostatic limit dynamics
    double eta = 1.0;          ///< coefficient of dy^2 in the viscosity
    double dt = 1e-3;
    double filter_alpha = 36.0;
    int filter_power = 16;
    double cfl_limit = 0.9;
    /// Constant mean pressure gradient driving the k=0 flow (the Poiseuille
    /// balance c = eta dy^2 ubar0|_wall keeps the wall curvature of convex
    /// data alive). 0 recovers the periodic-pressure system, whose global
    /// energy identity is exact.
    double mean_px = 0.0;
};

/// Flow state shared by both solvers; k=0 row of omega mirrors dy(ubar).
struct FlowFields {
    SpectralField omega, psi, u, v;
    double t = 0.0;
};

/// CN-AB2 streamfunction-vorticity stepper on the strip with exact no-slip
/// via the influence-matrix closure: per mode, two precomputed homogeneous
/// Helmholtz solutions trade the missing omega boundary values for
/// psi = dy psi = 0 at both walls. The first step runs two Euler half-steps.
class StripFlowSolver {
  public:
    StripFlowSolver(GridPtr g, SchemeConfig cfg) : g_(std::move(g)), cfg_(cfg) {
        if (!(cfg_.dt > 0.0)) throw ParameterError("SchemeConfig: dt must be > 0");
        if (cfg_.eps < 0.0) throw ParameterError("SchemeConfig: eps must be >= 0");
        const int nx = g_->nx();
        filter_.assign(nx, 1.0);
        const int kcut = std::max(1, g_->dealias_cutoff());
        for (int ki = 0; ki < nx; ++ki) {
            const int k = g_->wavenumber(ki);
            if (!g_->retained(k)) {
                filter_[ki] = 0.0;
                continue;
            }
            filter_[ki] = std::exp(-cfg_.filter_alpha * std::pow(std::abs(k) / double(kcut), cfg_.filter_power));
        }
        full_ = build_ops(cfg_.dt);
        half_ = build_ops(cfg_.dt / 2.0);
    }

    const SchemeConfig& config() const { return cfg_; }
    const GridPtr& grid() const { return g_; }

    /// Constant-in-time forcing added to the vorticity equation (per mode)
    /// and to the k=0 momentum equation; used by manufactured-solution tests.
    void set_forcing(SpectralField f_omega, RVector f_u0) {
        forcing_om_ = std::move(f_omega);
        forcing_u0_ = std::move(f_u0);
    }

    /// Assemble a consistent state from velocity data (omega and psi derived).
    FlowFields initial_state(const SpectralField& u0, const SpectralField& v0) const {
        require_same_grid(u0, v0);
        SpectralField om = ddy(u0);
        if (cfg_.eps > 0.0) {
            SpectralField dv = ddx(v0);
            dv *= sq(cfg_.eps);
            om -= dv;
        }
        FlowFields s;
        s.t = 0.0;
        s.omega = dealias(om);
        rebuild_velocities(s, mean_of(u0));
        sync_boundary_vorticity(s);
        return s;
    }

    void reset_history() { have_prev_ = false; }

    /// Advance one dt. Throws NumericalError on CFL violation or if an
    /// influence matrix is singular (message carries the mode index).
    FlowFields step(const FlowFields& s) {
        check_cfl(s);
        if (!have_prev_) {
            // AB2 startup: two explicit-Euler half steps
            FlowFields mid = substep(s, advect(s), std::nullopt, half_, cfg_.dt / 2.0);
            Advection adv0 = advect(s);
            FlowFields out = substep(mid, advect(mid), std::nullopt, half_, cfg_.dt / 2.0);
            prev_adv_ = std::move(adv0);
            have_prev_ = true;
            out.t = s.t + cfg_.dt;
            return out;
        }
        Advection adv = advect(s);
        FlowFields out = substep(s, adv, prev_adv_, full_, cfg_.dt);
        prev_adv_ = std::move(adv);
        out.t = s.t + cfg_.dt;
        return out;
    }

    /// Kinetic energy (1/2)||(u, eps v)||^2 in the Plancherel-normalized L2.
    double kinetic_energy(const FlowFields& s) const {
        const double weight = (cfg_.eps > 0.0) ? sq(cfg_.eps) : 0.0;
        return 0.5 * (sq(l2_norm(s.u)) + weight * sq(l2_norm(s.v)));
    }

    /// Dissipation functional ||eps dx u||^2 + ||dy u||^2 + ||eps^2 dx v||^2 + ||eps dy v||^2
    /// evaluated on given fields (used at the CN midpoint for the energy identity).
    double dissipation(const SpectralField& u, const SpectralField& v) const {
        const double e2 = sq(cfg_.eps);
        double d = e2 * sq(l2_norm(ddx(u))) + cfg_.eta * sq(l2_norm(ddy(u)));
        if (cfg_.eps > 0.0)
            d += sq(e2) * sq(l2_norm(ddx(v))) + cfg_.eta * e2 * sq(l2_norm(ddy(v)));
        return d;
    }

    double mean_of(const SpectralField& u) const {
        Complex s(0.0);
        const Complex* row = u.row_of_k(0);
        for (int j = 0; j < g_->ny(); ++j) s += g_->quad_weights()[j] * row[j];
        return s.real();
    }

    /// The constant mean pressure gradient this solver runs with.
    double mean_pressure_value() const { return cfg_.mean_px; }

  private:
    struct ModeOps {
        int k = 0;
        Lu H;            // CN Helmholtz with Dirichlet rows
        Lu L;            // stream operator with Dirichlet rows
        RVector om0, om1, psi0, psi1;
        double minv[4] = {0, 0, 0, 0};
    };
    struct StepOps {
        std::vector<ModeOps> modes;  // retained k != 0
        Lu k0;                       // CN heat for the mean flow
    };
    struct Advection {
        SpectralField omega;  // dealiased u dx omega + v dy omega
        CVector u0;           // k=0 row of dealiased u dx u + v dy u
    };

    GridPtr g_;
    SchemeConfig cfg_;
    RVector filter_;
    StepOps full_, half_;
    std::optional<Advection> prev_adv_;
    bool have_prev_ = false;
    std::optional<SpectralField> forcing_om_;
    RVector forcing_u0_;

    Mat diffusion_matrix(int k) const {
        const int ny = g_->ny();
        Mat m(ny, ny);
        const Mat& d2 = g_->d2y_matrix();
        const double lam = sq(cfg_.eps * k);
        for (int i = 0; i < ny; ++i) {
            for (int j = 0; j < ny; ++j) m(i, j) = cfg_.eta * d2(i, j);
            m(i, i) -= lam;
        }
        return m;
    }

    StepOps build_ops(double dt_eff) const {
        StepOps ops;
        const int ny = g_->ny();
        for (int ki = 0; ki < g_->nx(); ++ki) {
            const int k = g_->wavenumber(ki);
            if (k == 0 || !g_->retained(k)) continue;
            ModeOps mo;
            mo.k = k;
            Mat diff = diffusion_matrix(k);
            Mat h(ny, ny);
            for (int i = 1; i < ny - 1; ++i)
                for (int j = 0; j < ny; ++j) h(i, j) = (i == j ? 1.0 : 0.0) - 0.5 * dt_eff * diff(i, j);
            h(0, 0) = 1.0;
            h(ny - 1, ny - 1) = 1.0;
            mo.H = Lu(std::move(h));

            Mat l(ny, ny);
            const Mat& d2 = g_->d2y_matrix();
            const double lam = sq(cfg_.eps * k);
            for (int i = 1; i < ny - 1; ++i) {
                for (int j = 0; j < ny; ++j) l(i, j) = d2(i, j);
                l(i, i) -= lam;
            }
            l(0, 0) = 1.0;
            l(ny - 1, ny - 1) = 1.0;
            mo.L = Lu(std::move(l));

            RVector e0(ny, 0.0), e1(ny, 0.0);
            e0[0] = 1.0;
            e1[ny - 1] = 1.0;
            mo.om0 = mo.H.solve(e0);
            mo.om1 = mo.H.solve(e1);
            auto psi_of = [&](const RVector& om) {
                RVector r = om;
                r[0] = 0.0;
                r[ny - 1] = 0.0;
                return mo.L.solve(r);
            };
            mo.psi0 = psi_of(mo.om0);
            mo.psi1 = psi_of(mo.om1);
            const Mat& d = g_->ddy_matrix();
            auto dy_at = [&](const RVector& p, int row) {
                double s = 0.0;
                for (int j = 0; j < ny; ++j) s += d(row, j) * p[j];
                return s;
            };
            const double m00 = dy_at(mo.psi0, 0), m01 = dy_at(mo.psi1, 0);
            const double m10 = dy_at(mo.psi0, ny - 1), m11 = dy_at(mo.psi1, ny - 1);
            const double det = m00 * m11 - m01 * m10;
            const double scale = std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11), 1e-300});
            if (std::abs(det) < 1e-13 * scale * scale)
                throw NumericalError("influence matrix singular at mode k=" + std::to_string(k));
            mo.minv[0] = m11 / det;
            mo.minv[1] = -m01 / det;
            mo.minv[2] = -m10 / det;
            mo.minv[3] = m00 / det;
            ops.modes.push_back(std::move(mo));
        }
        Mat a(ny, ny);
        const Mat& d2 = g_->d2y_matrix();
        for (int i = 1; i < ny - 1; ++i)
            for (int j = 0; j < ny; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - 0.5 * dt_eff * cfg_.eta * d2(i, j);
        a(0, 0) = 1.0;
        a(ny - 1, ny - 1) = 1.0;
        ops.k0 = Lu(std::move(a));
        return ops;
    }

    void check_cfl(const FlowFields& s) const {
        NodalField un = inverse_transform_x(s.u);
        NodalField vn = inverse_transform_x(s.v);
        const double dx = TWO_PI / g_->nx();
        double worst = un.max_abs() * cfg_.dt / dx;
        const RVector& y = g_->y();
        for (int m = 0; m < g_->nx(); ++m)
            for (int j = 1; j < g_->ny() - 1; ++j) {
                const double dy_local = 0.5 * (y[j + 1] - y[j - 1]);
                worst = std::max(worst, std::abs(vn.at(m, j)) * cfg_.dt / dy_local);
            }
        if (worst > cfg_.cfl_limit)
            throw NumericalError("CFL violation: advective Courant number " + std::to_string(worst));
    }

    Advection advect(const FlowFields& s) const {
        NodalField un = inverse_transform_x(s.u);
        NodalField vn = inverse_transform_x(s.v);
        NodalField omx = inverse_transform_x(ddx(s.omega));
        NodalField omy = inverse_transform_x(ddy(s.omega));
        NodalField ux = inverse_transform_x(ddx(s.u));
        NodalField uy = inverse_transform_x(ddy(s.u));
        NodalField po(g_), pu(g_);
        for (size_t i = 0; i < po.v.size(); ++i) {
            po.v[i] = un.v[i] * omx.v[i] + vn.v[i] * omy.v[i];
            pu.v[i] = un.v[i] * ux.v[i] + vn.v[i] * uy.v[i];
        }
        Advection adv{dealias(transform_x(g_, po)), CVector(g_->ny())};
        SpectralField puh = dealias(transform_x(g_, pu));
        const Complex* r = puh.row_of_k(0);
        std::copy(r, r + g_->ny(), adv.u0.begin());
        return adv;
    }

    FlowFields substep(const FlowFields& s, const Advection& adv, const std::optional<Advection>& prev,
                       const StepOps& ops, double dt_eff) const {
        const int ny = g_->ny();
        FlowFields out;
        out.omega = SpectralField(g_);
        out.t = s.t + dt_eff;

        for (const ModeOps& mo : ops.modes) {
            const int ki = g_->row_of_k(mo.k);
            Mat diff = diffusion_matrix(mo.k);
            CVector cur(s.omega.row(ki), s.omega.row(ki) + ny);
            CVector rhs = diff.apply(cur);
            const Complex* an = adv.omega.row(ki);
            const Complex* ap = prev ? prev->omega.row(ki) : nullptr;
            const Complex* fo = forcing_om_ ? forcing_om_->row(ki) : nullptr;
            for (int j = 0; j < ny; ++j) {
                const Complex expl = prev ? (1.5 * an[j] - 0.5 * ap[j]) : an[j];
                rhs[j] = cur[j] + 0.5 * dt_eff * rhs[j] - dt_eff * expl + (fo ? dt_eff * fo[j] : Complex(0.0));
            }
            rhs[0] = Complex(0.0);
            rhs[ny - 1] = Complex(0.0);
            CVector omt = mo.H.solve(rhs);
            CVector rp = omt;
            rp[0] = Complex(0.0);
            rp[ny - 1] = Complex(0.0);
            CVector psit = mo.L.solve(rp);
            const Mat& d = g_->ddy_matrix();
            Complex b0(0.0), b1(0.0);
            for (int j = 0; j < ny; ++j) {
                b0 += d(0, j) * psit[j];
                b1 += d(ny - 1, j) * psit[j];
            }
            const Complex lam0 = -(mo.minv[0] * b0 + mo.minv[1] * b1);
            const Complex lam1 = -(mo.minv[2] * b0 + mo.minv[3] * b1);
            Complex* dst = out.omega.row(ki);
            for (int j = 0; j < ny; ++j) dst[j] = omt[j] + lam0 * mo.om0[j] + lam1 * mo.om1[j];
        }

        // mean flow: CN heat with the k=0 nonlinear flux and the constant
        // mean pressure gradient explicit
        CVector ubar(s.u.row_of_k(0), s.u.row_of_k(0) + ny);
        {
            const Mat& d2 = g_->d2y_matrix();
            CVector rhs(ny);
            CVector lap = d2.apply(ubar);
            for (int j = 0; j < ny; ++j) {
                const Complex expl = prev ? (1.5 * adv.u0[j] - 0.5 * prev->u0[j]) : adv.u0[j];
                const Complex f0 = forcing_u0_.empty() ? Complex(0.0) : Complex(forcing_u0_[j]);
                rhs[j] = ubar[j] + 0.5 * dt_eff * cfg_.eta * lap[j] - dt_eff * (expl + cfg_.mean_px) +
                         dt_eff * f0;
            }
            rhs[0] = Complex(0.0);
            rhs[ny - 1] = Complex(0.0);
            ubar = ops.k0.solve(rhs);
        }

        // spectral filter; psi/u/v inherit the same per-mode factors through
        // the linear reconstruction, so no-slip is untouched
        for (int ki = 0; ki < g_->nx(); ++ki) {
            Complex* row = out.omega.row(ki);
            for (int j = 0; j < ny; ++j) row[j] *= filter_[ki];
        }

        double mean = 0.0;
        for (int j = 0; j < ny; ++j) mean += g_->quad_weights()[j] * ubar[j].real();
        Complex* urow0 = out.omega.row_of_k(0);
        {
            const Mat& d = g_->ddy_matrix();
            CVector dy_ub = d.apply(ubar);
            std::copy(dy_ub.begin(), dy_ub.end(), urow0);
        }
        rebuild_velocities(out, mean, &ops, &ubar);
        sync_boundary_vorticity(out);
        return out;
    }

    /// Pin the wall rows of omega to (D^2 - eps^2 k^2) psi so that the state
    /// satisfies omega = dy u - eps^2 dx v exactly at every node; the
    /// influence-matrix charges fix the interior, this fixes the trace.
    void sync_boundary_vorticity(FlowFields& s) const {
        const int ny = g_->ny();
        const Mat& d2 = g_->d2y_matrix();
        for (int ki = 0; ki < g_->nx(); ++ki) {
            const int k = g_->wavenumber(ki);
            if (k == 0 || !g_->retained(k)) continue;
            const Complex* psi = s.psi.row(ki);
            Complex lo(0.0), hi(0.0);
            for (int j = 0; j < ny; ++j) {
                lo += d2(0, j) * psi[j];
                hi += d2(ny - 1, j) * psi[j];
            }
            s.omega.at(ki, 0) = lo;  // psi vanishes at the walls
            s.omega.at(ki, ny - 1) = hi;
        }
    }

    /// psi from omega by the Dirichlet stream solve, u = dy psi, v = -dx psi;
    /// the k=0 row of u is the mean flow itself.
    void rebuild_velocities(FlowFields& s, double mean, const StepOps* ops = nullptr,
                            const CVector* ubar = nullptr) const {
        const int ny = g_->ny();
        s.psi = SpectralField(g_);
        s.u = SpectralField(g_);
        s.v = SpectralField(g_);
        std::map<int, const ModeOps*> by_k;
        if (ops)
            for (const auto& mo : ops->modes) by_k[mo.k] = &mo;
        for (int ki = 0; ki < g_->nx(); ++ki) {
            const int k = g_->wavenumber(ki);
            if (k == 0 || !g_->retained(k)) continue;
            CVector rhs(s.omega.row(ki), s.omega.row(ki) + ny);
            rhs[0] = Complex(0.0);
            rhs[ny - 1] = Complex(0.0);
            CVector psi;
            if (auto it = by_k.find(k); it != by_k.end()) {
                psi = it->second->L.solve(rhs);
            } else {
                Lu lu = detail::dirichlet_helmholtz_lu(*g_, sq(cfg_.eps * k));
                psi = lu.solve(rhs);
            }
            std::copy(psi.begin(), psi.end(), s.psi.row(ki));
            const Mat& d = g_->ddy_matrix();
            CVector du = d.apply(psi);
            Complex* urow = s.u.row(ki);
            Complex* vrow = s.v.row(ki);
            for (int j = 0; j < ny; ++j) {
                urow[j] = du[j];
                vrow[j] = Complex(0.0, -double(k)) * psi[j];
            }
        }
        if (ubar) {
            std::copy(ubar->begin(), ubar->end(), s.u.row_of_k(0));
        } else {
            // from omega's k=0 row: u(0,y) = int_0^y omega dz + const to match mean
            SpectralField om0(g_);
            std::copy(s.omega.row_of_k(0), s.omega.row_of_k(0) + ny, om0.row_of_k(0));
            SpectralField cum = antiderivative_y(om0);
            Complex bar(0.0);
            for (int j = 0; j < ny; ++j) bar += g_->quad_weights()[j] * cum.at(g_->row_of_k(0), j);
            Complex* urow = s.u.row_of_k(0);
            for (int j = 0; j < ny; ++j) urow[j] = cum.at(g_->row_of_k(0), j) - bar + mean;
        }
    }
};

}  // namespace hydrolim
