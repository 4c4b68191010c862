#include "ris/config.hpp"

#include "ris/channel_model.hpp"
#include "ris/error.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ris {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::NmseSweep: return "nmse-sweep";
    case ExperimentKind::StatVsInst: return "stat-vs-inst";
    case ExperimentKind::PowerScaling: return "power-scaling";
    case ExperimentKind::Validate: return "validate";
    }
    return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
    for (auto k : {ExperimentKind::NmseSweep, ExperimentKind::StatVsInst, ExperimentKind::PowerScaling,
                   ExperimentKind::Validate})
        if (to_string(k) == name) return k;
    throw Error(ErrorKind::Config, "unknown experiment '" + name + "'");
}

SweepSpec default_sweep(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::PowerScaling: return {"N", {16, 36, 64, 144, 256, 576, 1024}};
    case ExperimentKind::Validate: return {"N", {}};
    default: return {"N", {16, 36, 64, 100, 144, 196, 256}};
    }
}

namespace {

void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw Error(ErrorKind::Config, where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key)) throw Error(ErrorKind::Config, "unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, where + "." + key + ": " + e.what());
    }
}

Angles angles_from_json(const json& j) {
    require_keys(j, "scenario.angles",
                 {"user_ris_azimuth", "user_ris_elevation", "ris_bs_azimuth", "ris_bs_elevation", "bs_azimuth",
                  "bs_elevation"});
    Angles a;
    const std::string w = "scenario.angles";
    read(j, "user_ris_azimuth", a.user_ris_azimuth, w);
    read(j, "user_ris_elevation", a.user_ris_elevation, w);
    read(j, "ris_bs_azimuth", a.ris_bs_azimuth, w);
    read(j, "ris_bs_elevation", a.ris_bs_elevation, w);
    read(j, "bs_azimuth", a.bs_azimuth, w);
    read(j, "bs_elevation", a.bs_elevation, w);
    return a;
}

json angles_to_json(const Angles& a) {
    return {{"user_ris_azimuth", a.user_ris_azimuth}, {"user_ris_elevation", a.user_ris_elevation},
            {"ris_bs_azimuth", a.ris_bs_azimuth},     {"ris_bs_elevation", a.ris_bs_elevation},
            {"bs_azimuth", a.bs_azimuth},             {"bs_elevation", a.bs_elevation}};
}

void scenario_from_json(const json& j, ExperimentConfig& cfg) {
    require_keys(j, "scenario",
                 {"M", "N", "p_dbm", "sigma2_dbm", "tau", "tau_c", "delta", "epsilon", "d_ui", "d_ib",
                  "geometry_angle", "pathloss_exponents", "pathloss_ref", "spacing_ratio", "angles"});
    Scenario& s = cfg.scenario;
    const std::string w = "scenario";
    read(j, "M", s.M, w);
    read(j, "N", s.N, w);
    read(j, "p_dbm", s.p_dbm, w);
    read(j, "sigma2_dbm", s.sigma2_dbm, w);
    read(j, "tau", s.tau, w);
    read(j, "tau_c", s.tau_c, w);
    read(j, "delta", s.delta, w);
    read(j, "epsilon", s.epsilon, w);
    read(j, "d_ui", s.d_ui, w);
    read(j, "d_ib", s.d_ib, w);
    read(j, "geometry_angle", s.geometry_angle, w);
    read(j, "pathloss_ref", s.pathloss_ref, w);
    read(j, "spacing_ratio", s.spacing_ratio, w);
    if (j.contains("pathloss_exponents")) {
        const json& pe = j.at("pathloss_exponents");
        require_keys(pe, "scenario.pathloss_exponents", {"user_ris", "ris_bs", "user_bs"});
        read(pe, "user_ris", s.pathloss_exponents.user_ris, "scenario.pathloss_exponents");
        read(pe, "ris_bs", s.pathloss_exponents.ris_bs, "scenario.pathloss_exponents");
        read(pe, "user_bs", s.pathloss_exponents.user_bs, "scenario.pathloss_exponents");
    }
    if (j.contains("angles")) cfg.angles = angles_from_json(j.at("angles"));
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    require_keys(j, "config",
                 {"experiment", "seed", "output", "scenario", "sweep", "mc", "power_scaling", "nmse_sweep",
                  "instantaneous", "validate"});
    ExperimentConfig cfg;
    if (j.contains("experiment")) {
        std::string name;
        read(j, "experiment", name, "config");
        cfg.experiment = parse_experiment(name);
    }
    read(j, "seed", cfg.seed, "config");
    read(j, "output", cfg.output_path, "config");
    if (j.contains("scenario")) scenario_from_json(j.at("scenario"), cfg);

    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        require_keys(sw, "sweep", {"var", "values"});
        SweepSpec spec;
        read(sw, "var", spec.var, "sweep");
        read(sw, "values", spec.values, "sweep");
        cfg.sweep = spec;
    }
    if (j.contains("mc")) {
        const json& mc = j.at("mc");
        require_keys(mc, "mc", {"trials", "parallelism", "ci_level", "bootstrap_resamples"});
        read(mc, "trials", cfg.mc.trials, "mc");
        read(mc, "parallelism", cfg.mc.parallelism, "mc");
        read(mc, "ci_level", cfg.mc.ci_level, "mc");
        read(mc, "bootstrap_resamples", cfg.mc.bootstrap_resamples, "mc");
    }
    if (j.contains("power_scaling")) {
        require_keys(j.at("power_scaling"), "power_scaling", {"e_u_dbm"});
        read(j.at("power_scaling"), "e_u_dbm", cfg.e_u_dbm, "power_scaling");
    }
    if (j.contains("nmse_sweep")) {
        require_keys(j.at("nmse_sweep"), "nmse_sweep", {"los_rician", "tau_alt"});
        read(j.at("nmse_sweep"), "los_rician", cfg.los_rician, "nmse_sweep");
        read(j.at("nmse_sweep"), "tau_alt", cfg.tau_alt, "nmse_sweep");
    }
    if (j.contains("instantaneous")) {
        require_keys(j.at("instantaneous"), "instantaneous", {"max_sweeps", "rel_tol"});
        read(j.at("instantaneous"), "max_sweeps", cfg.ascent.max_sweeps, "instantaneous");
        read(j.at("instantaneous"), "rel_tol", cfg.ascent.rel_tol, "instantaneous");
    }
    if (j.contains("validate")) {
        const json& v = j.at("validate");
        require_keys(v, "validate", {"cases", "nmse_tol", "mse_tol", "rate_tol"});
        read(v, "cases", cfg.validate.cases, "validate");
        read(v, "nmse_tol", cfg.validate.nmse_tol, "validate");
        read(v, "mse_tol", cfg.validate.mse_tol, "validate");
        read(v, "rate_tol", cfg.validate.rate_tol, "validate");
    }
    return cfg;
}

void ExperimentConfig::resolve() {
    scenario.seed = seed;
    mc.seed = seed;
    scenario.angles = angles ? *angles : draw_angles(seed);
    angles = scenario.angles;
    if (!sweep) sweep = default_sweep(experiment);

    mc.validate();
    scenario.validate();

    const std::set<std::string> vars{"N", "M", "tau"};
    if (!vars.count(sweep->var)) throw Error(ErrorKind::Config, "unsupported sweep variable '" + sweep->var + "'");
    if (experiment != ExperimentKind::Validate && sweep->var != "N")
        throw Error(ErrorKind::Config, to_string(experiment) + " sweeps N only");
    for (double v : sweep->values) {
        if (v != std::floor(v) || v < 1.0) throw Error(ErrorKind::Config, "sweep values must be positive integers");
        if ((sweep->var == "N" || sweep->var == "M") && !is_perfect_square(static_cast<int>(v)))
            throw Error(ErrorKind::Config, sweep->var + "=" + std::to_string(static_cast<int>(v)) +
                                               " is not a perfect square");
    }
    for (const auto& [m, n] : validate.cases)
        if (!is_perfect_square(m) || !is_perfect_square(n))
            throw Error(ErrorKind::Config, "validate cases must use perfect-square M and N");
    if (tau_alt < 1 || tau_alt >= scenario.tau_c) throw Error(ErrorKind::Config, "tau_alt must lie in [1, tau_c)");
}

json config_to_json(const ExperimentConfig& c) {
    const Scenario& s = c.scenario;
    json scen = {{"M", s.M},
                 {"N", s.N},
                 {"p_dbm", s.p_dbm},
                 {"sigma2_dbm", s.sigma2_dbm},
                 {"tau", s.tau},
                 {"tau_c", s.tau_c},
                 {"delta", s.delta},
                 {"epsilon", s.epsilon},
                 {"d_ui", s.d_ui},
                 {"d_ib", s.d_ib},
                 {"geometry_angle", s.geometry_angle},
                 {"pathloss_exponents",
                  {{"user_ris", s.pathloss_exponents.user_ris},
                   {"ris_bs", s.pathloss_exponents.ris_bs},
                   {"user_bs", s.pathloss_exponents.user_bs}}},
                 {"pathloss_ref", s.pathloss_ref},
                 {"spacing_ratio", s.spacing_ratio}};
    if (c.angles) scen["angles"] = angles_to_json(*c.angles);

    json j = {{"experiment", to_string(c.experiment)},
              {"seed", c.seed},
              {"output", c.output_path},
              {"scenario", scen},
              {"mc",
               {{"trials", c.mc.trials},
                {"parallelism", c.mc.parallelism},
                {"ci_level", c.mc.ci_level},
                {"bootstrap_resamples", c.mc.bootstrap_resamples}}},
              {"power_scaling", {{"e_u_dbm", c.e_u_dbm}}},
              {"nmse_sweep", {{"los_rician", c.los_rician}, {"tau_alt", c.tau_alt}}},
              {"instantaneous", {{"max_sweeps", c.ascent.max_sweeps}, {"rel_tol", c.ascent.rel_tol}}},
              {"validate",
               {{"cases", c.validate.cases},
                {"nmse_tol", c.validate.nmse_tol},
                {"mse_tol", c.validate.mse_tol},
                {"rate_tol", c.validate.rate_tol}}}};
    if (c.sweep) j["sweep"] = {{"var", c.sweep->var}, {"values", c.sweep->values}};
    return j;
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path + "'");
    try {
        return json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Config, "'" + path + "': " + e.what());
    }
}

SweepSpec parse_sweep_arg(const std::string& arg) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Config, "sweep must look like var=v1,v2,...");
    SweepSpec spec;
    spec.var = arg.substr(0, eq);
    std::stringstream ss(arg.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            spec.values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Config, "bad sweep value '" + item + "'");
        }
    }
    if (spec.values.empty()) throw Error(ErrorKind::Config, "sweep has no values");
    return spec;
}

}  // namespace ris
