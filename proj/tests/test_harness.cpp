#include <catch2/catch_amalgamated.hpp>

#include "hydrolim/harness.hpp"
#include "hydrolim/plot.hpp"

using namespace hydrolim;

TEST_CASE("config parse, validation, and content hash") {
    const std::string text =
        "# sample\n"
        "c0 = 1.0\na = 0.05\ndelta0 = 0.2\nN0 = 10\n"
        "sigma = 1.0\ntau0 = 0.5\nbeta = 4\n"
        "nx = 16\nny = 24\ndt = 5e-4\nT = 0.01\n"
        "epsilons = 0.3, 0.2, 0.1\nseed = 7\n";
    RunConfig cfg = config::parse(text);
    CHECK(cfg.data.a == 0.05);
    CHECK(cfg.nx == 16);
    CHECK(cfg.epsilons.size() == 3);
    CHECK(cfg.seed == 7);
    CHECK(cfg.config_hash == config::fnv1a(text));
    CHECK(cfg.config_hash == config::parse(text).config_hash);

    CHECK_THROWS_AS(config::parse("mystery = 1\n"), ParameterError);
    CHECK_THROWS_AS(config::parse("nx 16\n"), ParameterError);
    CHECK_THROWS_AS(config::parse("epsilons = 0.1, 0.2\n"), ParameterError);  // not decreasing
    CHECK_THROWS_AS(config::parse("epsilons = 1.5\n"), ParameterError);

    RunConfig round = config::parse(config::to_text(cfg));
    CHECK(round.dt == cfg.dt);
    CHECK(round.epsilons == cfg.epsilons);
}

TEST_CASE("rate fit: exact powers and the failure verdict") {
    RVector eps{0.2, 0.1, 0.05, 0.025};
    RVector e2(eps.size()), einf(eps.size());
    for (size_t i = 0; i < eps.size(); ++i) {
        e2[i] = 3.0 * sq(eps[i]);
        einf[i] = 7.0 * sq(eps[i]);
    }
    RateFit fit = fit_rate(eps, e2, einf);
    CHECK(std::abs(fit.slope_l2 - 2.0) <= 1e-12);
    CHECK(std::abs(fit.slope_linf - 2.0) <= 1e-12);
    CHECK(std::abs(std::exp(fit.intercept_l2) - 3.0) <= 1e-12);
    CHECK(fit.r2_l2 == 1.0);
    CHECK(fit.pass);

    for (size_t i = 0; i < eps.size(); ++i) e2[i] = einf[i] = 0.5 * eps[i];  // first order
    RateFit bad = fit_rate(eps, e2, einf);
    CHECK(std::abs(bad.slope_l2 - 1.0) <= 1e-12);
    CHECK_FALSE(bad.pass);

    CHECK_THROWS_AS(fit_rate({0.1, 0.05}, {1, 2}, {1, 2}), ParameterError);
}

TEST_CASE("pipeline smoke run: exactness at a = 0 and byte-identical reports") {
    RunConfig cfg;
    cfg.data = DataSpec{1.0, 0.0, 0.2, 10, 0.0};
    cfg.nx = 8;
    cfg.ny = 24;
    cfg.dt = 5e-4;
    cfg.T = 0.01;
    cfg.epsilons = {0.3, 0.2};
    cfg.report_every = 10;
    cfg.lift_nodes = 48;
    cfg.config_hash = 42;

    PipelineResult r1 = run_pipeline(cfg);
    REQUIRE(r1.hydro.outcome == Outcome::Completed);
    REQUIRE(r1.eps_reports.size() == 2);
    for (const auto& rep : r1.eps_reports) {
        CHECK(rep.outcome == Outcome::Completed);
        CHECK(rep.sup_L2 <= 1e-9);  // both solvers share the heat path
        CHECK(rep.sup_Linf <= 1e-9);
    }

    PipelineResult r2 = run_pipeline(cfg);
    for (size_t i = 0; i < r1.eps_reports.size(); ++i) {
        const Json a = reports::to_json(r1.eps_reports[i], cfg.config_hash);
        const Json b = reports::to_json(r2.eps_reports[i], cfg.config_hash);
        CHECK(a.dump() == b.dump());  // determinism, bit for bit
    }
}

TEST_CASE("pipeline writes snapshots, reports and the monitor CSV") {
    RunConfig cfg;
    cfg.data = DataSpec{1.0, 0.05, 0.2, 10, 0.0};
    cfg.nx = 8;
    cfg.ny = 24;
    cfg.dt = 5e-4;
    cfg.T = 0.005;
    cfg.epsilons = {0.3, 0.2, 0.1};
    cfg.report_every = 5;
    cfg.lift_nodes = 48;
    const std::string dir = "harness_out_test";
    std::filesystem::remove_all(dir);
    PipelineResult res = run_pipeline(cfg, dir, true);
    REQUIRE(res.hydro.outcome == Outcome::Completed);
    CHECK(std::filesystem::exists(dir + "/hydro_monitor.csv"));
    CHECK(std::filesystem::exists(dir + "/u_hydro.hlim"));
    for (double e : cfg.epsilons)
        CHECK(std::filesystem::exists(dir + "/report_eps" + std::to_string(e) + ".json"));
    {
        std::ifstream is(dir + "/hydro_monitor.csv");
        std::string header;
        std::getline(is, header);
        CHECK(header == "t,tau,min_dyy_u,Xnorm_level1,Xnorm_level2");
    }

    // plot emission from the written reports
    std::vector<Json> reps;
    for (double e : cfg.epsilons)
        reps.push_back(reports::read_json(dir + "/report_eps" + std::to_string(e) + ".json"));
    emit_plots(reps, dir + "/plots", dir + "/hydro_monitor.csv");
    CHECK(std::filesystem::exists(dir + "/plots/rate.csv"));
    CHECK(std::filesystem::exists(dir + "/plots/plot_rate.gp"));
    CHECK(std::filesystem::exists(dir + "/plots/plot_energy.gp"));
    CHECK(std::filesystem::exists(dir + "/plots/plot_radius.gp"));
    {
        std::ifstream is(dir + "/plots/rate.csv");
        std::string line;
        int rows = 0, fits = 0;
        while (std::getline(is, line)) {
            if (line.rfind("# fit", 0) == 0) ++fits;
            else if (!line.empty() && line[0] != '#') ++rows;
        }
        CHECK(rows == 3);
        CHECK(fits == 2);
    }
    CHECK_THROWS_AS(emit_plots({}, dir + "/plots"), ParameterError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("worker count respects the environment cap") {
    setenv("HYDROLIM_THREADS", "1", 1);
    CHECK(worker_count(8) == 1);
    setenv("HYDROLIM_THREADS", "4", 1);
    CHECK(worker_count(8) <= 4);
    CHECK(worker_count(2) <= 2);
    unsetenv("HYDROLIM_THREADS");
}
