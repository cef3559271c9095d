#pragma once

#include "hydrolim/harness.hpp"

namespace hydrolim {

/// Batch plot emission: CSV data plus self-contained gnuplot scripts
/// (log-log error vs eps with the fit line, energy functionals vs t,
/// Gevrey radius vs t). No interactive output.
inline void emit_plots(const std::vector<Json>& eps_reports, const std::string& out_dir,
                       const std::string& monitor_csv = "") {
    if (eps_reports.empty()) throw ParameterError("plot: no reports given");
    std::filesystem::create_directories(out_dir);

    RVector eps, e2, einf;
    for (const auto& r : eps_reports) {
        eps.push_back(r.at("epsilon").get<double>());
        e2.push_back(r.at("sup_L2").get<double>());
        einf.push_back(r.at("sup_Linf").get<double>());
    }
    std::string fit_header = "# columns: epsilon, sup_L2, sup_Linf\n";
    if (eps.size() >= 3) {
        RateFit fit = fit_rate(eps, e2, einf);
        std::ostringstream fh;
        fh.precision(17);
        fh << "# fit_L2: slope " << fit.slope_l2 << " intercept " << fit.intercept_l2 << " R2 " << fit.r2_l2
           << "\n# fit_Linf: slope " << fit.slope_linf << " intercept " << fit.intercept_linf << " R2 "
           << fit.r2_linf << "\n";
        fit_header += fh.str();
    }
    {
        std::ofstream os(out_dir + "/rate.csv");
        os << fit_header << std::setprecision(17);
        for (size_t i = 0; i < eps.size(); ++i) os << eps[i] << ',' << e2[i] << ',' << einf[i] << "\n";
    }
    {
        std::ofstream os(out_dir + "/plot_rate.gp");
        os << "set terminal pngcairo size 800,600\nset output 'rate.png'\n"
              "set logscale xy\nset xlabel 'epsilon'\nset ylabel 'sup_t error'\n"
              "set datafile separator ','\n"
              "plot 'rate.csv' using 1:2 with points pt 7 title 'L2', \\\n"
              "     'rate.csv' using 1:3 with points pt 5 title 'Linf', \\\n"
              "     [*:*] exp(2*log(x)) * (column(2)/x**2) notitle with lines dt 2\n";
    }
    for (const auto& r : eps_reports) {
        const double e = r.at("epsilon").get<double>();
        std::ofstream os(out_dir + "/energy_eps" + std::to_string(e) + ".csv");
        os << "# columns: t, E, G, D, bootstrap_ratio\n" << std::setprecision(17);
        for (const auto& rec : r.at("records"))
            os << rec.at("t").get<double>() << ',' << rec.at("E").get<double>() << ','
               << rec.at("G").get<double>() << ',' << rec.at("D").get<double>() << ','
               << rec.at("bootstrap_ratio").get<double>() << "\n";
    }
    {
        std::ofstream os(out_dir + "/plot_energy.gp");
        os << "set terminal pngcairo size 800,600\nset output 'energy.png'\n"
              "set xlabel 't'\nset ylabel 'energy functionals'\nset logscale y\n"
              "set datafile separator ','\n"
              "plot for [f in system('ls energy_eps*.csv')] f using 1:2 with lines title f\n";
    }
    if (!monitor_csv.empty() && std::filesystem::exists(monitor_csv)) {
        std::filesystem::copy_file(monitor_csv, out_dir + "/hydro_monitor.csv",
                                   std::filesystem::copy_options::overwrite_existing);
        std::ofstream os(out_dir + "/plot_radius.gp");
        os << "set terminal pngcairo size 800,600\nset output 'radius.png'\n"
              "set xlabel 't'\nset ylabel 'tau(t), min dy^2 u'\n"
              "set datafile separator ','\n"
              "plot 'hydro_monitor.csv' using 1:2 every ::1 with lines title 'tau', \\\n"
              "     'hydro_monitor.csv' using 1:3 every ::1 with lines title 'min dyy u'\n";
    }
}

}  // namespace hydrolim
