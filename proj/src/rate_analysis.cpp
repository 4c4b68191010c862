#include "ris/rate_analysis.hpp"

#include "ris/channel_model.hpp"
#include "ris/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ris {

cplx f_k(const PhaseShifts& phases, const CVector& h_bar, const CVector& a_N) {
    if (phases.size() != h_bar.size() || h_bar.size() != a_N.size())
        throw Error(ErrorKind::DimensionMismatch, "f_k operands differ in length");
    return a_N.dot(phases.diagonal().cwiseProduct(h_bar));  // a_N^H Phi h_bar
}

double log2_1p(double snr) { return std::log1p(snr) / std::numbers::ln2; }

double SnrQuadratic::snr(double x) const {
    const double num = s1 * x + s2;
    const double den = t1 * x + t2;
    if (num == 0.0) return 0.0;
    return num * num / den;
}

namespace {

struct Terms {
    double noise;
    double leakage;
};

// Signal-independent pieces of the closed-form bound at x = |f|^2.
Terms closed_form_terms(const Scenario& s, const LinkGains& g, const EstimatorModel& m, double x) {
    const double M = s.M;
    const double N = s.N;
    const double c = g.c;
    const double gm = g.gamma;
    const double dl = s.delta;
    const double ep = s.epsilon;
    const double rho = m.noise_ratio;
    const double e1 = m.e1, e2 = m.e2, e3 = m.e3;
    const double e2sq = e2 * e2;

    Terms t{};
    t.noise = M * (x * c * dl * ep + N * c * dl * e2 + (N * c * (ep + 1.0) + gm) * e1);

    double leak = 0.0;
    leak += M * x * c * c * dl * ep *
            (N * (M * dl + ep + 1.0) * (e2sq + 1.0) + 2.0 * (M * e1 + e2) * (e2 + 1.0));
    leak += M * x * c * dl * ep * (gm + (gm + rho) * e2sq);
    leak += M * M * N * N * c * c * dl * dl * e2sq;
    leak += M * N * N * c * c * (2.0 * dl * (ep + 1.0) * e2sq + (ep + 1.0) * (ep + 1.0) * e3);
    leak += M * M * N * c * c * ((2.0 * ep + 1.0) * e1 * e1 + 2.0 * dl * e1 * e2);
    leak += M * N * c *
            (c * (2.0 * dl * e2sq + (2.0 * ep + 1.0) * e3) +
             (2.0 * gm + rho) * (dl * e2sq + (ep + 1.0) * e3));
    leak += M * gm * (gm + rho) * e3;
    t.leakage = leak;
    return t;
}

}  // namespace

RateBreakdown rate_lower_bound_at(const Scenario& s, const LinkGains& g, const EstimatorModel& m,
                                  double f_abs2) {
    RateBreakdown r;
    r.f_abs2 = f_abs2;
    const double p = s.p_mw();
    const double sigma2 = s.sigma2_mw();
    if (!(p > 0.0) || std::isinf(m.noise_ratio)) return r;

    const Terms t = closed_form_terms(s, g, m, f_abs2);
    r.e_noise = t.noise;
    r.e_signal = t.noise * t.noise;
    r.e_leakage = t.leakage;
    const double den = p * r.e_leakage + sigma2 * r.e_noise;
    r.snr = den > 0.0 ? p * r.e_signal / den : 0.0;
    r.rate = s.prelog() * log2_1p(r.snr);
    return r;
}

RateBreakdown rate_lower_bound(const Scenario& s, const LinkGains& g, const LosComponents& los,
                               const EstimatorModel& m, const PhaseShifts& phases) {
    return rate_lower_bound_at(s, g, m, std::norm(f_k(phases, los.h_bar, los.a_N)));
}

SnrQuadratic snr_quadratic(const Scenario& s, const LinkGains& g, const EstimatorModel& m) {
    const double M = s.M;
    const double N = s.N;
    const double c = g.c;
    const double gm = g.gamma;
    const double dl = s.delta;
    const double ep = s.epsilon;
    const double rho = m.noise_ratio;
    const double e1 = m.e1, e2 = m.e2, e3 = m.e3;
    const double e2sq = e2 * e2;
    const double noise_over_p = s.sigma2_mw() / s.p_mw();

    SnrQuadratic q;
    // E_noise = s1 x + s2
    q.s1 = M * c * dl * ep;
    q.s2 = M * (N * c * dl * e2 + (N * c * (ep + 1.0) + gm) * e1);

    // E_leakage + (sigma^2/p) E_noise = t1 x + t2
    const double los_pair = c * dl * ep;
    q.t1 = M * c * los_pair * (N * (M * dl + ep + 1.0) * (e2sq + 1.0) + 2.0 * (M * e1 + e2) * (e2 + 1.0)) +
           M * los_pair * (gm + (gm + rho) * e2sq) + noise_over_p * q.s1;
    q.t2 = M * M * N * N * c * c * dl * dl * e2sq +
           M * N * N * c * c * (2.0 * dl * (ep + 1.0) * e2sq + (ep + 1.0) * (ep + 1.0) * e3) +
           M * M * N * c * c * ((2.0 * ep + 1.0) * e1 * e1 + 2.0 * dl * e1 * e2) +
           M * N * c * (c * (2.0 * dl * e2sq + (2.0 * ep + 1.0) * e3) + (2.0 * gm + rho) * (dl * e2sq + (ep + 1.0) * e3)) +
           M * gm * (gm + rho) * e3 + noise_over_p * q.s2;

    q.degenerate = (q.s1 == 0.0 || q.t1 == 0.0);
    q.x0 = q.degenerate ? std::numeric_limits<double>::quiet_NaN()
                        : (q.s2 * q.t1 - 2.0 * q.s1 * q.t2) / (q.s1 * q.t1);
    return q;
}

namespace {

enum Column : std::size_t { kInnerRe, kInnerIm, kEstNorm2, kColumns };

struct MomentRate {
    double snr;
    double rate;
    cplx mean_inner;
    double var_inner;
    double mean_norm2;
};

MomentRate rate_from_moments(const TrialTable& table, std::span<const std::size_t> idx, double p,
                             double sigma2, double prelog) {
    const double n = double(idx.size());
    std::vector<double> buf(idx.size());
    auto mean_of = [&](auto&& value) {
        for (std::size_t i = 0; i < idx.size(); ++i) buf[i] = value(idx[i]);
        return pairwise_sum(buf) / n;
    };
    const double re = mean_of([&](std::size_t t) { return table.at(t, kInnerRe); });
    const double im = mean_of([&](std::size_t t) { return table.at(t, kInnerIm); });
    const double var = mean_of([&](std::size_t t) {
        const double dr = table.at(t, kInnerRe) - re;
        const double di = table.at(t, kInnerIm) - im;
        return dr * dr + di * di;
    });
    const double norm2 = mean_of([&](std::size_t t) { return table.at(t, kEstNorm2); });

    MomentRate r{};
    r.mean_inner = {re, im};
    r.var_inner = var;
    r.mean_norm2 = norm2;
    const double den = p * var + sigma2 * norm2;
    r.snr = den > 0.0 ? p * std::norm(r.mean_inner) / den : 0.0;
    r.rate = prelog * log2_1p(r.snr);
    return r;
}

}  // namespace

EmpiricalRate empirical_rate_bound(const Scenario& s, const LinkGains& g, const LosComponents& los,
                                   const EstimatorModel& model, const PhaseShifts& phases,
                                   const McConfig& mc) {
    if (mc.trials < kMinRateTrials)
        throw Error(ErrorKind::InsufficientTrials,
                    "empirical rate bound needs at least " + std::to_string(kMinRateTrials) + " trials");

    EmpiricalRate out;
    out.trials = mc.trials;
    const double p = s.p_mw();
    if (!(p > 0.0)) return out;

    const TrialTable table = run_trials(mc, kColumns, [&](std::size_t, RngStream& rng, std::span<double> row) {
        const ChannelSample sample = sample_channels(s, g, los, phases, rng);
        const Observation obs = observe(sample, s, rng);
        const CVector q_hat = lmmse_estimate(model, obs);
        const cplx inner = q_hat.dot(sample.q);  // q_hat^H q
        row[kInnerRe] = inner.real();
        row[kInnerIm] = inner.imag();
        row[kEstNorm2] = q_hat.squaredNorm();
    });

    const double sigma2 = s.sigma2_mw();
    const double prelog = s.prelog();
    const auto idx = all_indices(table.trials());
    const MomentRate full = rate_from_moments(table, idx, p, sigma2, prelog);
    out.rate = full.rate;
    out.snr = full.snr;
    out.mean_inner = full.mean_inner;
    out.var_inner = full.var_inner;
    out.mean_est_norm2 = full.mean_norm2;

    const BootstrapResult ci = bootstrap(table, mc, [&](const TrialTable& t, std::span<const std::size_t> i) {
        return rate_from_moments(t, i, p, sigma2, prelog).rate;
    });
    out.ci_low = ci.ci_low;
    out.ci_high = ci.ci_high;
    return out;
}

ScalingLimit rate_limit_scaling_n2(const Scenario& s, const LinkGains& g, double e_u_mw) {
    if (!(s.delta > 0.0) || !(s.epsilon > 0.0))
        throw Error(ErrorKind::ScalingLawInapplicable, "p = E_u/N^2 limit needs delta > 0 and epsilon > 0");
    ScalingLimit lim;
    const double ba = g.beta * g.alpha;
    lim.snr = e_u_mw / s.sigma2_mw() * double(s.M) * ba * s.delta * s.epsilon /
              ((s.delta + 1.0) * (s.epsilon + 1.0));
    lim.rate = s.prelog() * log2_1p(lim.snr);
    return lim;
}

ScalingLimit rate_limit_rayleigh_n(const Scenario& s, const LinkGains& g, double e_u_mw) {
    if (s.delta != 0.0 || s.epsilon != 0.0)
        throw Error(ErrorKind::ScalingLawInapplicable, "p = E_u/N limit holds only for delta = epsilon = 0");
    ScalingLimit lim;
    const double ba = g.beta * g.alpha;
    const double sigma2 = s.sigma2_mw();
    const double tau = s.tau;
    lim.snr = e_u_mw * double(s.M) * ba /
              (e_u_mw * ba + sigma2 / tau + sigma2 * (1.0 + sigma2 / (tau * e_u_mw * ba)));
    lim.rate = s.prelog() * log2_1p(lim.snr);
    return lim;
}

}  // namespace ris
