#include "ris/monte_carlo.hpp"

#include "ris/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <mutex>
#include <thread>

namespace ris {

void McConfig::validate() const {
    if (trials == 0) throw Error(ErrorKind::EmptyRun, "trials must be >= 1");
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw Error(ErrorKind::Config, "ci_level must lie in (0, 1)");
    if (parallelism == 0) throw Error(ErrorKind::Config, "parallelism must be >= 1");
}

double pairwise_sum(std::span<const double> v) {
    constexpr std::size_t kBlock = 32;
    if (v.size() <= kBlock) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double TrialTable::column_sum(std::size_t c) const {
    std::vector<double> col(trials_);
    for (std::size_t t = 0; t < trials_; ++t) col[t] = at(t, c);
    return pairwise_sum(col);
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

TrialTable run_trials(const McConfig& config, std::size_t columns, const TrialFn& per_trial) {
    config.validate();
    TrialTable table(config.trials, columns);
    parallel_for(config.trials, config.parallelism, [&](std::size_t t) {
        RngStream rng(config.seed, stream_key::kTrials, t);
        per_trial(t, rng, table.row(t));
    });
    return table;
}

double resample_mean(const TrialTable& table, std::span<const std::size_t> idx, std::size_t column) {
    std::vector<double> buf(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) buf[i] = table.at(idx[i], column);
    return pairwise_sum(buf) / double(idx.size());
}

namespace {

double percentile(std::vector<double> sorted, double q) {
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * double(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - double(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

BootstrapResult bootstrap(const TrialTable& table, const McConfig& config, const ResampleStat& stat) {
    config.validate();
    const std::size_t n = table.trials();
    BootstrapResult out;
    out.estimate = stat(table, all_indices(n));
    if (config.bootstrap_resamples < 2 || n < 2) {
        out.ci_low = out.ci_high = out.estimate;
        return out;
    }

    std::vector<double> replicates(config.bootstrap_resamples);
    parallel_for(config.bootstrap_resamples, config.parallelism, [&](std::size_t b) {
        RngStream rng(config.seed, stream_key::kBootstrap, b);
        std::vector<std::size_t> idx(n);
        for (auto& i : idx) i = static_cast<std::size_t>(rng.next_u64() % n);
        replicates[b] = stat(table, idx);
    });

    const double mean = pairwise_sum(replicates) / double(replicates.size());
    std::vector<double> dev(replicates.size());
    for (std::size_t b = 0; b < replicates.size(); ++b) dev[b] = (replicates[b] - mean) * (replicates[b] - mean);
    out.std_error = std::sqrt(pairwise_sum(dev) / double(replicates.size() - 1));

    const double tail = 0.5 * (1.0 - config.ci_level);
    out.ci_low = std::min(percentile(replicates, tail), out.estimate);
    out.ci_high = std::max(percentile(replicates, 1.0 - tail), out.estimate);
    return out;
}

std::vector<McSummary> summarize(const TrialTable& table, const McConfig& config) {
    std::vector<McSummary> out(table.columns());
    const std::size_t n = table.trials();
    for (std::size_t c = 0; c < table.columns(); ++c) {
        McSummary& s = out[c];
        s.trials_used = n;
        s.mean = table.column_mean(c);
        if (n > 1) {
            std::vector<double> dev(n);
            for (std::size_t t = 0; t < n; ++t) dev[t] = (table.at(t, c) - s.mean) * (table.at(t, c) - s.mean);
            s.variance = pairwise_sum(dev) / double(n - 1);
        }
        const BootstrapResult b = bootstrap(table, config, [c](const TrialTable& t, std::span<const std::size_t> idx) {
            return resample_mean(t, idx, c);
        });
        s.ci_low = b.ci_low;
        s.ci_high = b.ci_high;
    }
    return out;
}

}  // namespace ris
