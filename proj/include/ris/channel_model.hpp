#pragma once

#include "ris/rng.hpp"
#include "ris/types.hpp"

namespace ris {

/// dBm to milliwatts.
double dbm_to_linear(double x_dbm);

bool is_perfect_square(int x);

/// Uniform square planar array response of `elements` elements.
/// Entry x (1-based) is
///   exp{j 2pi (d/lambda) (floor((x-1)/sqrt(X)) sin(el) sin(az) + ((x-1) mod sqrt(X)) cos(el))}.
CVector steering_vector(int elements, double azimuth, double elevation, double spacing_ratio);

LosComponents los_components(const Scenario& scenario);

LinkGains link_gains(const Scenario& scenario);

/// One joint draw of d, h and H2, with g and q formed for `phases`.
ChannelSample sample_channels(const Scenario& scenario, const LinkGains& gains,
                              const LosComponents& los, const PhaseShifts& phases,
                              RngStream& rng);

/// q = H2 diag(e^{j theta}) h + d.
CVector overall_channel(const ChannelSample& sample, const PhaseShifts& phases);

/// Refreshes g and q of `sample` for new phases.
void apply_phases(ChannelSample& sample, const PhaseShifts& phases);

}  // namespace ris
