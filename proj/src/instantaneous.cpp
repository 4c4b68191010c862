#include "ris/instantaneous.hpp"

#include "ris/channel_model.hpp"
#include "ris/rate_analysis.hpp"

#include <cmath>

namespace ris {

double channel_gain(const ChannelSample& sample, const PhaseShifts& phases) {
    return overall_channel(sample, phases).squaredNorm();
}

CoordinateAscentResult maximize_channel_gain(const ChannelSample& sample,
                                             const CoordinateAscentOptions& options) {
    const Eigen::Index n_elems = sample.h.size();
    // per-element cascaded contributions at zero phase
    const CMatrix contrib = sample.H2 * sample.h.asDiagonal();

    RVector theta = RVector::Zero(n_elems);
    CVector total = sample.d;

    // greedy start: place each element's phase against the running sum
    for (Eigen::Index n = 0; n < n_elems; ++n) {
        const cplx proj = contrib.col(n).dot(total);  // b_n^H r
        theta[n] = (total.squaredNorm() > 0.0) ? std::arg(proj) : 0.0;
        total += std::polar(1.0, theta[n]) * contrib.col(n);
    }

    double gain = total.squaredNorm();
    int sweeps = 0;
    while (sweeps < options.max_sweeps) {
        ++sweeps;
        const double before = gain;
        for (Eigen::Index n = 0; n < n_elems; ++n) {
            const CVector residual = total - std::polar(1.0, theta[n]) * contrib.col(n);
            const cplx proj = contrib.col(n).dot(residual);
            if (std::abs(proj) == 0.0) continue;
            theta[n] = std::arg(proj);
            total = residual + std::polar(1.0, theta[n]) * contrib.col(n);
        }
        gain = total.squaredNorm();
        if (gain - before <= options.rel_tol * std::max(before, 1e-300)) break;
    }

    CoordinateAscentResult out;
    out.phases = PhaseShifts(std::move(theta));
    out.gain = channel_gain(sample, out.phases);
    out.sweeps = sweeps;
    return out;
}

double instantaneous_rate(const ChannelSample& sample, const Scenario& s, const CoordinateAscentOptions& options) {
    const double gain = maximize_channel_gain(sample, options).gain;
    return log2_1p(s.p_mw() * gain / s.sigma2_mw());
}

InstantaneousBaseline instantaneous_baseline_rate(const Scenario& s, const LinkGains& g, const LosComponents& los,
                                                  const McConfig& mc, const CoordinateAscentOptions& options) {
    const PhaseShifts zero = PhaseShifts::zeros(s.N);
    const TrialTable table = run_trials(mc, 1, [&](std::size_t, RngStream& rng, std::span<double> row) {
        const ChannelSample sample = sample_channels(s, g, los, zero, rng);
        row[0] = instantaneous_rate(sample, s, options);
    });
    InstantaneousBaseline out;
    out.rate = summarize(table, mc).front();
    return out;
}

}  // namespace ris
