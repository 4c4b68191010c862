#pragma once

#include "ris/instantaneous.hpp"
#include "ris/monte_carlo.hpp"
#include "ris/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ris {

enum class ExperimentKind { NmseSweep, StatVsInst, PowerScaling, Validate };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);

struct SweepSpec {
    std::string var = "N";
    std::vector<double> values;
};

struct ValidateOptions {
    std::vector<std::pair<int, int>> cases{{4, 4}, {9, 16}};  // (M, N)
    double nmse_tol = 0.01;
    double mse_tol = 0.01;
    double rate_tol = 0.02;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::NmseSweep;
    std::uint64_t seed = 1;
    Scenario scenario = Scenario::defaults(1);
    std::optional<Angles> angles;  // unset: drawn from the seed
    std::optional<SweepSpec> sweep;  // unset: per-experiment default
    McConfig mc;
    std::string output_path;

    double e_u_dbm = 20.0;      // power-scaling budget
    double los_rician = 1e6;    // Rician factors of the near-LoS reference curve
    int tau_alt = 4;            // pilot length of the tau cross-check column
    CoordinateAscentOptions ascent;
    ValidateOptions validate;

    /// Fills derived fields (seeds, angles, sweep defaults) and checks invariants.
    void resolve();
    const SweepSpec& resolved_sweep() const { return *sweep; }
};

SweepSpec default_sweep(ExperimentKind kind);

/// Strict parse: unknown keys raise Error{Config}.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Reads a config file (JSON). Throws Error{Config}.
nlohmann::json load_config_file(const std::string& path);

/// Parses "var=v1,v2,...".
SweepSpec parse_sweep_arg(const std::string& arg);

}  // namespace ris
