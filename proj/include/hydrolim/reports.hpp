#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "hydrolim/config.hpp"
#include "hydrolim/error_analysis.hpp"
#include "hydrolim/gevrey_checks.hpp"

namespace hydrolim {

using Json = nlohmann::ordered_json;

/// One time record of the per-epsilon error report.
struct ErrorRecord {
    double t = 0.0;
    double L2_error = 0.0;    ///< ||(u^R, eps v^R)||_{L2}
    double Linf_error = 0.0;  ///< max(|u^R|, eps |v^R|) over nodes
    EnergyTriple energy;
    double bootstrap_ratio = 0.0;
    double h0_norm = 0.0, h1_norm = 0.0, h0l_norm = 0.0, h1l_norm = 0.0;
    double boundary_residual = 0.0;
    double boundary_lhs_scale = 0.0;
};

struct EpsReport {
    double epsilon = 0.0;
    std::vector<ErrorRecord> records;
    double sup_L2 = 0.0, sup_Linf = 0.0;
    double bootstrap_value = 0.0, bootstrap_ratio = 0.0;
    Outcome outcome = Outcome::Completed;
    std::string message;
};

namespace reports {

inline Json to_json(const ErrorRecord& r, double eps) {
    return Json{{"epsilon", eps},
                {"t", r.t},
                {"L2_error", r.L2_error},
                {"Linf_error", r.Linf_error},
                {"E", r.energy.E},
                {"G", r.energy.G},
                {"D", r.energy.D},
                {"bootstrap_ratio", r.bootstrap_ratio},
                {"h_norms",
                 {{"h0", r.h0_norm}, {"h1", r.h1_norm}, {"h0_l", r.h0l_norm}, {"h1_l", r.h1l_norm}}},
                {"residuals",
                 {{"omega_boundary_max", r.boundary_residual}, {"omega_boundary_scale", r.boundary_lhs_scale}}}};
}

inline Json to_json(const EpsReport& rep, uint64_t config_hash) {
    Json recs = Json::array();
    for (const auto& r : rep.records) recs.push_back(to_json(r, rep.epsilon));
    return Json{{"epsilon", rep.epsilon},
                {"config_hash", config_hash},
                {"outcome", outcome_name(rep.outcome)},
                {"message", rep.message},
                {"sup_L2", rep.sup_L2},
                {"sup_Linf", rep.sup_Linf},
                {"bootstrap_value", rep.bootstrap_value},
                {"bootstrap_ratio", rep.bootstrap_ratio},
                {"records", recs}};
}

inline Json to_json(const LemmaReport& r) {
    return Json{{"lemma", r.lemma},
                {"params", r.params},
                {"trials", r.trials},
                {"seed", r.seed},
                {"max_ratio", r.max_ratio}};
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << "\n";
}

inline Json read_json(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    Json j;
    is >> j;
    return j;
}

inline void write_monitor_csv(const std::filesystem::path& path, const std::vector<MonitorRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << "t,tau,min_dyy_u,Xnorm_level1,Xnorm_level2\n";
    os << std::setprecision(17);
    for (const auto& r : rows)
        os << r.t << ',' << r.tau << ',' << r.min_dyy_u << ',' << r.xnorm_level1 << ',' << r.xnorm_level2
           << "\n";
}

}  // namespace reports
}  // namespace hydrolim
