#pragma once

#include "ris/config.hpp"
#include "ris/csv.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ris {

/// Versioned CSV schema identifiers, one per experiment.
inline constexpr int kCsvSchemaVersion = 1;
std::string csv_schema(ExperimentKind kind);

struct ExperimentResult {
    std::vector<ResultRow> rows;
    bool validation_passed = true;
    nlohmann::json extra = nlohmann::json::object();  // limits and other sidecar values
};

std::vector<ResultRow> run_nmse_sweep(const ExperimentConfig& config);
std::vector<ResultRow> run_stat_vs_inst(const ExperimentConfig& config);
ExperimentResult run_power_scaling(const ExperimentConfig& config);
ExperimentResult run_validate(const ExperimentConfig& config);

/// Dispatches on config.experiment. `config` must be resolved.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Sidecar contents: resolved config, version, seed, schema.
nlohmann::json run_metadata(const ExperimentConfig& config, const ExperimentResult& result);

/// Writes `csv_path` and `csv_path + ".meta.json"`.
void write_outputs(const std::string& csv_path, const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace ris
