#pragma once

#include "ris/estimation.hpp"
#include "ris/monte_carlo.hpp"
#include "ris/types.hpp"

#include <optional>

namespace ris {

struct RateBreakdown {
    double f_abs2 = 0.0;
    double e_signal = 0.0;
    double e_leakage = 0.0;
    double e_noise = 0.0;
    double snr = 0.0;
    double rate = 0.0;  // bits/s/Hz, includes the (tau_c - tau)/tau_c prelog
};

/// SNR(x) = (s1 x + s2)^2 / (t1 x + t2) with x = |f(Phi)|^2.
struct SnrQuadratic {
    double s1 = 0.0;
    double s2 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double x0 = 0.0;          // stationary point; NaN when degenerate
    bool degenerate = false;  // s1 = t1 = 0, SNR independent of the phases

    double snr(double x) const;
};

/// f(Phi) = a_N^H Phi h_bar.
cplx f_k(const PhaseShifts& phases, const CVector& h_bar, const CVector& a_N);

/// log2(1 + snr), accurate for tiny snr.
double log2_1p(double snr);

RateBreakdown rate_lower_bound(const Scenario& scenario, const LinkGains& gains,
                               const LosComponents& los, const EstimatorModel& model,
                               const PhaseShifts& phases);

/// Closed-form breakdown evaluated at a given x = |f|^2 instead of phases.
RateBreakdown rate_lower_bound_at(const Scenario& scenario, const LinkGains& gains,
                                  const EstimatorModel& model, double f_abs2);

SnrQuadratic snr_quadratic(const Scenario& scenario, const LinkGains& gains,
                           const EstimatorModel& model);

struct EmpiricalRate {
    double rate = 0.0;
    double snr = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    cplx mean_inner = 0.0;      // E{q_hat^H q}
    double var_inner = 0.0;     // Var{q_hat^H q}
    double mean_est_norm2 = 0.0;  // E{||q_hat||^2}
    std::size_t trials = 0;
};

inline constexpr std::size_t kMinRateTrials = 1000;

/// Use-and-then-forget bound from sample moments over fresh joint draws of
/// channels and pilot noise.
EmpiricalRate empirical_rate_bound(const Scenario& scenario, const LinkGains& gains,
                                   const LosComponents& los, const EstimatorModel& model,
                                   const PhaseShifts& phases, const McConfig& mc);

struct ScalingLimit {
    double snr = 0.0;
    double rate = 0.0;
};

/// Rician limit as N grows with p = E_u / N^2. Requires delta, eps > 0.
ScalingLimit rate_limit_scaling_n2(const Scenario& scenario, const LinkGains& gains, double e_u_mw);

/// Rayleigh (delta = eps = 0) limit as N grows with p = E_u / N.
ScalingLimit rate_limit_rayleigh_n(const Scenario& scenario, const LinkGains& gains, double e_u_mw);

}  // namespace ris
