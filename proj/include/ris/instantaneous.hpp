#pragma once

#include "ris/monte_carlo.hpp"
#include "ris/types.hpp"

namespace ris {

/// Genie-aided per-realization phase design used as the instantaneous-CSI
/// baseline: perfect knowledge of d, h and H2 in every coherence interval.
struct CoordinateAscentOptions {
    int max_sweeps = 100;
    double rel_tol = 1e-9;
};

struct CoordinateAscentResult {
    PhaseShifts phases;
    double gain = 0.0;  // ||q||^2 at the returned phases
    int sweeps = 0;
};

/// Maximises ||H2 diag(e^{j theta}) h + d||^2 one phase at a time. Each
/// update is the exact maximiser over that phase with the others fixed.
CoordinateAscentResult maximize_channel_gain(const ChannelSample& sample,
                                             const CoordinateAscentOptions& options = {});

/// ||sum_n b_n e^{j theta_n} + d||^2 with b_n = H2(:, n) h_n.
double channel_gain(const ChannelSample& sample, const PhaseShifts& phases);

/// log2(1 + p ||q||^2 / sigma^2) with genie-optimised phases, before any
/// pilot-overhead factor.
double instantaneous_rate(const ChannelSample& sample, const Scenario& scenario,
                          const CoordinateAscentOptions& options = {});

struct InstantaneousBaseline {
    McSummary rate;  // pre-loss-factor, averaged over realizations
};

InstantaneousBaseline instantaneous_baseline_rate(const Scenario& scenario, const LinkGains& gains,
                                                  const LosComponents& los, const McConfig& mc,
                                                  const CoordinateAscentOptions& options = {});

}  // namespace ris
