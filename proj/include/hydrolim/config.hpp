#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "hydrolim/gevrey.hpp"
#include "hydrolim/initial_data.hpp"

namespace hydrolim {

/// Full description of a reproducible run; read from a plain-text
/// key = value file and referenced by content hash in every report.
struct RunConfig {
    DataSpec data;
    GevreyParams gevrey;
    int nx = 32;
    int ny = 64;
    double dt = 2.5e-4;
    double T = 0.25;
    double filter_alpha = 36.0;
    double dealias_fraction = 2.0 / 3.0;
    double L_lift = 1.0;
    int lift_nodes = 96;
    double A_weight = 1.0;
    RVector epsilons{0.2, 0.1, 0.05};
    int report_every = 20;
    uint64_t seed = 1;
    std::string out_dir = "out";
    uint64_t config_hash = 0;

    void validate() const {
        data.validate();
        gevrey.validate();
        GridSpec{nx, ny, dealias_fraction}.validate();
        if (!(dt > 0.0) || !(T > 0.0)) throw ParameterError("RunConfig: dt and T must be > 0");
        if (!(L_lift > 0.0)) throw ParameterError("RunConfig: L_lift must be > 0");
        if (report_every < 1) throw ParameterError("RunConfig: report_every must be >= 1");
        for (size_t i = 0; i < epsilons.size(); ++i) {
            if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0))
                throw ParameterError("RunConfig: epsilon values must lie in (0,1)");
            if (i > 0 && epsilons[i] >= epsilons[i - 1])
                throw ParameterError("RunConfig: epsilon values must be strictly decreasing");
        }
    }
};

namespace config {

inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline RunConfig parse(const std::string& text) {
    RunConfig cfg;
    cfg.config_hash = fnv1a(text);
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        auto as_double = [&] { return std::stod(val); };
        auto as_int = [&] { return std::stoi(val); };
        if (key == "c0") cfg.data.c0 = as_double();
        else if (key == "a") cfg.data.a = as_double();
        else if (key == "delta0") cfg.data.delta0 = as_double();
        else if (key == "N0") cfg.data.N0 = as_int();
        else if (key == "M_bound") cfg.data.M_bound = as_double();
        else if (key == "sigma") cfg.gevrey.sigma = as_double();
        else if (key == "tau0") cfg.gevrey.tau0 = as_double();
        else if (key == "beta") cfg.gevrey.beta = as_double();
        else if (key == "nx") cfg.nx = as_int();
        else if (key == "ny") cfg.ny = as_int();
        else if (key == "dt") cfg.dt = as_double();
        else if (key == "T") cfg.T = as_double();
        else if (key == "filter_alpha") cfg.filter_alpha = as_double();
        else if (key == "dealias_fraction") cfg.dealias_fraction = as_double();
        else if (key == "L_lift") cfg.L_lift = as_double();
        else if (key == "lift_nodes") cfg.lift_nodes = as_int();
        else if (key == "A_weight") cfg.A_weight = as_double();
        else if (key == "report_every") cfg.report_every = as_int();
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "epsilons") {
            cfg.epsilons.clear();
            std::istringstream vs(val);
            std::string tok;
            while (std::getline(vs, tok, ',')) {
                tok = trim(tok);
                if (!tok.empty()) cfg.epsilons.push_back(std::stod(tok));
            }
        } else {
            throw ParameterError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline RunConfig load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParameterError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

inline std::string to_text(const RunConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "c0 = " << c.data.c0 << "\na = " << c.data.a << "\ndelta0 = " << c.data.delta0
       << "\nN0 = " << c.data.N0 << "\nsigma = " << c.gevrey.sigma << "\ntau0 = " << c.gevrey.tau0
       << "\nbeta = " << c.gevrey.beta << "\nnx = " << c.nx << "\nny = " << c.ny << "\ndt = " << c.dt
       << "\nT = " << c.T << "\nfilter_alpha = " << c.filter_alpha
       << "\ndealias_fraction = " << c.dealias_fraction << "\nL_lift = " << c.L_lift
       << "\nlift_nodes = " << c.lift_nodes << "\nA_weight = " << c.A_weight
       << "\nreport_every = " << c.report_every << "\nseed = " << c.seed << "\nepsilons = ";
    for (size_t i = 0; i < c.epsilons.size(); ++i) os << (i ? ", " : "") << c.epsilons[i];
    os << "\n";
    return os.str();
}

}  // namespace config
}  // namespace hydrolim
