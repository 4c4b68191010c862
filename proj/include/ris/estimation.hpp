#pragma once

#include "ris/monte_carlo.hpp"
#include "ris/rng.hpp"
#include "ris/types.hpp"

namespace ris {

/// LMMSE estimator of the overall channel q for a fixed scenario and
/// phase configuration: q_hat = A y + B with A = a3 a_M a_M^H + a4 I.
struct EstimatorModel {
    int M = 0;
    int N = 0;
    double c = 0.0;
    double a1 = 0.0;  // N c delta
    double a2 = 0.0;  // N c (eps+1) + gamma
    double a3 = 0.0;
    double a4 = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;
    double noise_ratio = 0.0;  // sigma^2 / (tau p)
    CVector a_M;
    CMatrix A;
    CVector B;

    /// A x via the rank-one-plus-identity structure, O(M).
    CVector apply_A(const CVector& x) const;
};

struct Observation {
    CVector y;  // despread pilot observation
    double noise_scale = 0.0;
};

EstimatorModel build_estimator(const Scenario& scenario, const LinkGains& gains,
                               const LosComponents& los, const PhaseShifts& phases);

/// Same as build_estimator but with an explicit sigma^2/(tau p). A ratio of
/// zero gives the perfect-CSI model (e1 = e2 = e3 = 1, B = 0).
EstimatorModel build_estimator(const Scenario& scenario, const LinkGains& gains,
                               const LosComponents& los, const PhaseShifts& phases,
                               double noise_ratio);

/// y = q + w, w ~ CN(0, sigma^2/(tau p) I).
Observation observe(const ChannelSample& sample, const Scenario& scenario, RngStream& rng);

CVector lmmse_estimate(const EstimatorModel& model, const Observation& obs);

/// Least-squares estimate of q from the despread observation (identity).
CVector ls_estimate(const Observation& obs);

double nmse_closed_form(const EstimatorModel& model);

/// tr(MSE) = NMSE * M (a1 + a2).
double mse_trace_closed_form(const EstimatorModel& model);

/// Monte-Carlo counterparts of the closed forms, from joint draws of
/// channels and pilot noise. NMSE is normalised by the sample trace of the
/// channel covariance, matching tr(C_q) = M (a1 + a2).
struct EmpiricalEstimation {
    BootstrapResult nmse;
    McSummary mse_trace;     // ||q_hat - q||^2
    McSummary ls_mse_trace;  // ||y - q||^2
    double covariance_trace = 0.0;
    /// |E{(q - q_hat)^H q_hat}| / E{||q_hat||^2}; zero for an LMMSE estimate.
    double orthogonality = 0.0;
    std::size_t trials = 0;
};

EmpiricalEstimation empirical_estimation(const Scenario& scenario, const LinkGains& gains,
                                         const LosComponents& los, const EstimatorModel& model,
                                         const PhaseShifts& phases, const McConfig& mc);

}  // namespace ris
