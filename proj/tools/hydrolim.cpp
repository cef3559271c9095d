// hydrolim: spectral laboratory for the hydrostatic limit of the
// anisotropic Navier-Stokes system on a periodic strip.
//
// Subcommands: gen-data, run, rate-fit, verify, plot.
// Exit codes: 0 success, 1 numerical failure, 2 usage/config error.

#include <iostream>

#include <CLI11.hpp>

#include "hydrolim/harness.hpp"
#include "hydrolim/plot.hpp"
#include "hydrolim/verify.hpp"

using namespace hydrolim;

namespace {

RunConfig load_config(const std::string& path, const std::string& out_override, uint64_t seed_override,
                      bool seed_set) {
    RunConfig cfg = path.empty() ? RunConfig{} : config::load(path);
    if (path.empty()) cfg.config_hash = config::fnv1a(config::to_text(cfg));
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_set) cfg.seed = seed_override;
    return cfg;
}

int cmd_gen_data(const RunConfig& cfg) {
    GridPtr grid = make_grid(cfg.nx, cfg.ny, cfg.dealias_fraction);
    auto [u0_raw, v0_raw] = make_family(cfg.data, grid);
    Com2Result com2 = correct_com2(u0_raw, cfg.data);
    SpectralField v0 = family_velocity(com2.u0);
    std::filesystem::create_directories(cfg.out_dir);
    snapshot::write(cfg.out_dir + "/u0.hlim", com2.u0, 0.0);
    snapshot::write(cfg.out_dir + "/v0.hlim", v0, 0.0);

    CompatReport before = check_compatibility(u0_raw, v0_raw);
    CompatReport after = check_compatibility(com2.u0, v0);
    CompatReport after_none = check_compatibility(com2.u0, v0, AreaNorm::None);
    const double M = check_gevrey_bound(com2.u0, cfg.gevrey.sigma, cfg.gevrey.tau0, cfg.data.N0);
    Json j{{"config_hash", cfg.config_hash},
           {"com2_iterations", com2.iterations},
           {"com2_residual", com2.residual},
           {"gevrey_bound_M", M},
           {"before", Json{{"divergence", before.divergence},
                           {"boundary", before.boundary},
                           {"vertical_mean", before.vertical_mean},
                           {"corner_fluct", before.corner_fluct},
                           {"corner_mean", before.corner_mean}}},
           {"after", Json{{"divergence", after.divergence},
                          {"boundary", after.boundary},
                          {"vertical_mean", after.vertical_mean},
                          {"corner_fluct", after.corner_fluct},
                          {"corner_mean", after.corner_mean},
                          {"corner_mean_no_area_term", after_none.corner_mean}}}};
    if (cfg.data.M_bound > 0.0) j["M_within_bound"] = M <= cfg.data.M_bound;
    reports::write_json(cfg.out_dir + "/gen_data_report.json", j);
    std::cout << "wrote " << cfg.out_dir << "/u0.hlim, v0.hlim, gen_data_report.json (M = " << M << ")\n";
    return 0;
}

int cmd_run(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    PipelineResult res = run_pipeline(cfg, cfg.out_dir, true);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.hydro.outcome != Outcome::Completed) {
        std::cerr << "hydrostatic solve aborted: " << outcome_name(res.hydro.outcome) << " — "
                  << res.hydro.message << "\n";
        return 1;
    }
    bool ok = true;
    for (const auto& rep : res.eps_reports) {
        std::cout << "eps = " << rep.epsilon << ": sup_L2 = " << rep.sup_L2
                  << ", sup_Linf = " << rep.sup_Linf << ", bootstrap/eps^4 = " << rep.bootstrap_ratio
                  << " [" << outcome_name(rep.outcome) << "]\n";
        if (rep.outcome != Outcome::Completed) {
            std::cerr << "  (eps = " << rep.epsilon << ", module anisotropic-ns-solver): " << rep.message
                      << "\n";
            ok = false;
        }
    }
    std::cout << "pipeline finished in " << secs << " s; reports in " << cfg.out_dir << "\n";
    return ok ? 0 : 1;
}

int cmd_rate_fit(const std::vector<std::string>& report_paths, double thr_l2, double thr_linf) {
    RVector eps, e2, einf;
    for (const auto& p : report_paths) {
        Json j = reports::read_json(p);
        eps.push_back(j.at("epsilon").get<double>());
        e2.push_back(j.at("sup_L2").get<double>());
        einf.push_back(j.at("sup_Linf").get<double>());
    }
    RateFit fit = fit_rate(eps, e2, einf, thr_l2, thr_linf);
    Json j{{"epsilons", fit.epsilons},
           {"errors_L2", fit.errors_l2},
           {"errors_Linf", fit.errors_linf},
           {"slope_L2", fit.slope_l2},
           {"intercept_L2", fit.intercept_l2},
           {"R2_L2", fit.r2_l2},
           {"slope_Linf", fit.slope_linf},
           {"intercept_Linf", fit.intercept_linf},
           {"R2_Linf", fit.r2_linf},
           {"thresholds", Json{{"L2", thr_l2}, {"Linf", thr_linf}}},
           {"verdict", fit.pass ? "PASS" : "FAIL"}};
    std::cout << j.dump(2) << "\n";
    return fit.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hydrolim — hydrostatic-limit spectral laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, level = "quick";
    uint64_t seed = 0;
    bool seed_set = false;
    double thr_l2 = 1.8, thr_linf = 1.7;
    std::vector<std::string> inputs;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file (key = value lines)");
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
    };

    CLI::App* gen = app.add_subcommand("gen-data", "generate and validate initial data");
    add_common(gen);
    CLI::App* run = app.add_subcommand("run", "hydro solve + eps sweep + error analysis");
    add_common(run);
    CLI::App* fitc = app.add_subcommand("rate-fit", "fit the error-vs-eps slope from reports");
    fitc->add_option("reports", inputs, "per-eps report JSON files")->required();
    fitc->add_option("--threshold-l2", thr_l2, "pass threshold for the L2 slope");
    fitc->add_option("--threshold-linf", thr_linf, "pass threshold for the Linf slope");
    CLI::App* ver = app.add_subcommand("verify", "run the verification suites");
    add_common(ver);
    ver->add_option("--level", level, "quick|full")->check(CLI::IsMember({"quick", "full"}));
    CLI::App* plot = app.add_subcommand("plot", "emit CSV + gnuplot scripts from reports");
    plot->add_option("reports", inputs, "per-eps report JSON files");
    plot->add_option("--out", out_dir, "output directory")->required();
    plot->add_option("--monitor", config_path, "hydro monitor CSV to include");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(load_config(config_path, out_dir, seed, seed_set));
        if (run->parsed()) return cmd_run(load_config(config_path, out_dir, seed, seed_set));
        if (fitc->parsed()) return cmd_rate_fit(inputs, thr_l2, thr_linf);
        if (ver->parsed()) {
            VerifySuite s = run_verify(level == "full" ? VerifyLevel::Full : VerifyLevel::Quick,
                                       seed_set ? seed : 12345);
            Json j = to_json(s, level == "full" ? VerifyLevel::Full : VerifyLevel::Quick);
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                reports::write_json(out_dir + "/verify_report.json", j);
            }
            std::cout << j.dump(2) << "\n";
            return s.all_pass ? 0 : 1;
        }
        if (plot->parsed()) {
            std::vector<Json> reps;
            for (const auto& p : inputs) reps.push_back(reports::read_json(p));
            emit_plots(reps, out_dir, config_path);
            std::cout << "plot data and scripts written to " << out_dir << "\n";
            return 0;
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
