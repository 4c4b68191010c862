#include "ris/estimation.hpp"

#include "ris/channel_model.hpp"
#include "ris/error.hpp"

#include <cmath>
#include <limits>

namespace ris {

CVector EstimatorModel::apply_A(const CVector& x) const {
    const cplx projection = a_M.dot(x);  // a_M^H x
    return a3 * projection * a_M + a4 * x;
}

EstimatorModel build_estimator(const Scenario& scenario, const LinkGains& gains,
                               const LosComponents& los, const PhaseShifts& phases) {
    return build_estimator(scenario, gains, los, phases, scenario.noise_ratio());
}

EstimatorModel build_estimator(const Scenario& s, const LinkGains& gains, const LosComponents& los,
                               const PhaseShifts& phases, double rho) {
    if (phases.size() != s.N || los.a_M.size() != s.M)
        throw Error(ErrorKind::DimensionMismatch, "phases or LoS components do not match the scenario");

    EstimatorModel m;
    m.M = s.M;
    m.N = s.N;
    m.c = gains.c;
    m.noise_ratio = rho;
    m.a_M = los.a_M;

    const double Md = s.M;
    m.a1 = s.N * gains.c * s.delta;
    m.a2 = s.N * gains.c * (s.epsilon + 1.0) + gains.gamma;

    if (std::isinf(rho)) {
        // no usable pilot: the estimate collapses to the channel mean
        m.a3 = 0.0;
        m.a4 = 0.0;
    } else {
        m.a3 = m.a1 * rho / ((m.a2 + rho) * (m.a2 + rho + Md * m.a1));
        m.a4 = m.a2 / (m.a2 + rho);
    }

    m.e1 = m.a3 + m.a4;
    m.e2 = Md * m.a3 + m.a4;
    m.e3 = Md * m.a3 * m.a3 + 2.0 * m.a3 * m.a4 + m.a4 * m.a4;

    m.A = m.a3 * (m.a_M * m.a_M.adjoint()) + m.a4 * CMatrix::Identity(s.M, s.M);

    const double los_weight = std::sqrt(gains.c * s.delta * s.epsilon);
    const CVector mean_q = los_weight * (los.H2_bar * phases.diagonal().cwiseProduct(los.h_bar));
    m.B = mean_q - m.apply_A(mean_q);
    return m;
}

Observation observe(const ChannelSample& sample, const Scenario& scenario, RngStream& rng) {
    Observation obs;
    obs.noise_scale = scenario.noise_ratio();
    obs.y = sample.q;
    if (obs.noise_scale > 0.0) {
        const double sd = std::sqrt(obs.noise_scale);
        for (Eigen::Index i = 0; i < obs.y.size(); ++i) obs.y[i] += sd * rng.complex_normal();
    }
    return obs;
}

CVector lmmse_estimate(const EstimatorModel& model, const Observation& obs) {
    if (obs.y.size() != model.M) throw Error(ErrorKind::DimensionMismatch, "observation length differs from M");
    return model.apply_A(obs.y) + model.B;
}

CVector ls_estimate(const Observation& obs) { return obs.y; }

double nmse_closed_form(const EstimatorModel& m) {
    const double power = m.a1 + m.a2;
    if (!(power > 0.0)) throw Error(ErrorKind::UndefinedNmse, "channel has zero power (a1 + a2 = 0)");
    const double rho = m.noise_ratio;
    if (std::isinf(rho)) return 1.0;
    const double Md = m.M;
    const double num = rho * (Md * m.a1 * m.a2 + m.a2 * m.a2 + power * rho);
    const double den = (m.a2 + rho) * (m.a2 + rho + Md * m.a1) * power;
    return num / den;
}

double mse_trace_closed_form(const EstimatorModel& m) {
    return nmse_closed_form(m) * double(m.M) * (m.a1 + m.a2);
}

}  // namespace ris

namespace ris {

namespace {

enum EstColumn : std::size_t { kErr, kLsErr, kQNorm, kCrossRe, kCrossIm, kEstNorm, kFirstQ };

double covariance_trace(const TrialTable& table, std::span<const std::size_t> idx, int M) {
    double trace = resample_mean(table, idx, kQNorm);
    for (int m = 0; m < M; ++m) {
        const double re = resample_mean(table, idx, kFirstQ + 2 * m);
        const double im = resample_mean(table, idx, kFirstQ + 2 * m + 1);
        trace -= re * re + im * im;
    }
    return trace;
}

}  // namespace

EmpiricalEstimation empirical_estimation(const Scenario& s, const LinkGains& g, const LosComponents& los,
                                         const EstimatorModel& model, const PhaseShifts& phases,
                                         const McConfig& mc) {
    const int M = s.M;
    const TrialTable table =
        run_trials(mc, kFirstQ + 2 * std::size_t(M), [&](std::size_t, RngStream& rng, std::span<double> row) {
            const ChannelSample sample = sample_channels(s, g, los, phases, rng);
            const Observation obs = observe(sample, s, rng);
            const CVector q_hat = lmmse_estimate(model, obs);
            const CVector err = sample.q - q_hat;
            const cplx cross = err.dot(q_hat);
            row[kErr] = err.squaredNorm();
            row[kLsErr] = (ls_estimate(obs) - sample.q).squaredNorm();
            row[kQNorm] = sample.q.squaredNorm();
            row[kCrossRe] = cross.real();
            row[kCrossIm] = cross.imag();
            row[kEstNorm] = q_hat.squaredNorm();
            for (int m = 0; m < M; ++m) {
                row[kFirstQ + 2 * m] = sample.q[m].real();
                row[kFirstQ + 2 * m + 1] = sample.q[m].imag();
            }
        });

    EmpiricalEstimation out;
    out.trials = table.trials();
    const auto idx = all_indices(table.trials());
    out.covariance_trace = covariance_trace(table, idx, M);
    out.nmse = bootstrap(table, mc, [M](const TrialTable& t, std::span<const std::size_t> i) {
        return resample_mean(t, i, kErr) / covariance_trace(t, i, M);
    });

    // summarise the two error columns only; the q columns are bulk
    TrialTable errors(table.trials(), 2);
    for (std::size_t t = 0; t < table.trials(); ++t) {
        errors.row(t)[0] = table.at(t, kErr);
        errors.row(t)[1] = table.at(t, kLsErr);
    }
    const auto summary = summarize(errors, mc);
    out.mse_trace = summary[0];
    out.ls_mse_trace = summary[1];

    const cplx cross(table.column_mean(kCrossRe), table.column_mean(kCrossIm));
    out.orthogonality = std::abs(cross) / table.column_mean(kEstNorm);
    return out;
}

}  // namespace ris
