#pragma once

#include "ris/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ris {

struct McConfig {
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned parallelism = 1;
    double ci_level = 0.95;
    std::size_t bootstrap_resamples = 200;

    void validate() const;
};

struct McSummary {
    double mean = 0.0;
    double variance = 0.0;  // sample variance of the per-trial values
    double ci_low = 0.0;    // bootstrap percentile interval of the mean
    double ci_high = 0.0;
    std::size_t trials_used = 0;
};

/// Per-trial values, row-major: trials x columns.
class TrialTable {
public:
    TrialTable(std::size_t trials, std::size_t columns)
        : trials_(trials), columns_(columns), data_(trials * columns, 0.0) {}

    std::size_t trials() const { return trials_; }
    std::size_t columns() const { return columns_; }
    std::span<double> row(std::size_t t) { return {data_.data() + t * columns_, columns_}; }
    std::span<const double> row(std::size_t t) const {
        return {data_.data() + t * columns_, columns_};
    }
    double at(std::size_t t, std::size_t c) const { return data_[t * columns_ + c]; }

    /// Pairwise sum of one column in trial order.
    double column_sum(std::size_t c) const;
    double column_mean(std::size_t c) const { return column_sum(c) / double(trials_); }

private:
    std::size_t trials_;
    std::size_t columns_;
    std::vector<double> data_;
};

/// Fills one row of tracked values for trial `index` from its own stream.
using TrialFn = std::function<void(std::size_t index, RngStream& rng, std::span<double> out)>;

/// Runs `trials` independent trials, each with a stream derived from
/// (seed, index). The table is identical for any parallelism.
TrialTable run_trials(const McConfig& config, std::size_t columns, const TrialFn& per_trial);

/// Mean, variance and bootstrap CI for every column.
std::vector<McSummary> summarize(const TrialTable& table, const McConfig& config);

/// Statistic evaluated over a resample, given as trial indices.
using ResampleStat = std::function<double(const TrialTable& table, std::span<const std::size_t> idx)>;

struct BootstrapResult {
    double estimate = 0.0;  // statistic on the full table
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

BootstrapResult bootstrap(const TrialTable& table, const McConfig& config, const ResampleStat& stat);

/// Pairwise (cascade) summation; fixed association order.
double pairwise_sum(std::span<const double> values);

/// Helpers for resample statistics.
double resample_mean(const TrialTable& table, std::span<const std::size_t> idx, std::size_t column);

/// Index vector 0..n-1.
std::vector<std::size_t> all_indices(std::size_t n);

/// Splits [0, n) across `workers` threads in contiguous chunks.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace ris
