#include "oracles.hpp"

#include "ris/channel_model.hpp"
#include "ris/error.hpp"
#include "ris/estimation.hpp"
#include "ris/phase_optimizer.hpp"

#include <doctest.h>

#include <cmath>

using namespace ris;

namespace {

Scenario make(int M, int N, double delta = 1.0, double eps = 10.0, std::uint64_t seed = 11) {
    Scenario s = Scenario::defaults(seed);
    s.M = M;
    s.N = N;
    s.delta = delta;
    s.epsilon = eps;
    return s;
}

PhaseShifts random_phases(int N, std::uint64_t seed) {
    RngStream rng(seed, 99);
    RVector theta(N);
    for (int n = 0; n < N; ++n) theta[n] = 2 * kPi * rng.uniform();
    return PhaseShifts(theta);
}

}  // namespace

TEST_CASE("perfect observation limit") {
    const Scenario s = make(4, 4);
    const LinkGains g = link_gains(s);
    const LosComponents los = los_components(s);
    const EstimatorModel m = build_estimator(s, g, los, random_phases(4, 1), 0.0);
    CHECK(m.a3 == 0.0);
    CHECK(m.a4 == 1.0);
    CHECK((m.A - CMatrix::Identity(4, 4)).norm() == 0.0);
    CHECK(m.B.norm() < 1e-30);
    CHECK(m.e1 == 1.0);
    CHECK(m.e2 == 1.0);
    CHECK(m.e3 == 1.0);
    CHECK(nmse_closed_form(m) == 0.0);
    CHECK(mse_trace_closed_form(m) == 0.0);
}

TEST_CASE("pure Rayleigh reduces to shrinkage") {
    const Scenario s = make(9, 16, 0.0, 0.0);
    const LinkGains g = link_gains(s);
    const LosComponents los = los_components(s);
    const EstimatorModel m = build_estimator(s, g, los, random_phases(16, 2));
    CHECK(m.a1 == 0.0);
    CHECK(m.a3 == 0.0);
    CHECK(m.B.norm() == 0.0);
    CHECK((m.A - m.a4 * CMatrix::Identity(9, 9)).norm() == 0.0);

    Observation obs;
    obs.y = CVector::Constant(9, cplx(1.0, -2.0));
    CHECK((lmmse_estimate(m, obs) - m.a4 * obs.y).norm() < 1e-15);
}

TEST_CASE("coefficients agree with an explicit covariance-matrix LMMSE") {
    // reference deployment: M = N = 64, tau = 1, p = 30 dBm, sigma^2 = -104 dBm
    const Scenario s = make(64, 64);
    const LinkGains g = link_gains(s);
    const LosComponents los = los_components(s);
    const PhaseShifts phases = random_phases(64, 3);
    const EstimatorModel m = build_estimator(s, g, los, phases);

    // scalar formulas, written out again
    const double rho = std::pow(10.0, -10.4) / (1.0 * 1000.0);
    const double c = g.beta * g.alpha / (2.0 * 11.0);
    const double a1 = 64 * c * 1.0;
    const double a2 = 64 * c * 11.0 + g.gamma;
    CHECK(m.noise_ratio == doctest::Approx(rho).epsilon(1e-14));
    CHECK(m.a1 == doctest::Approx(a1).epsilon(1e-14));
    CHECK(m.a2 == doctest::Approx(a2).epsilon(1e-14));
    CHECK(m.a3 == doctest::Approx(a1 * rho / ((a2 + rho) * (a2 + rho + 64 * a1))).epsilon(1e-13));
    CHECK(m.a4 == doctest::Approx(a2 / (a2 + rho)).epsilon(1e-14));

    // matrix route: A = C (C + rho I)^-1, MSE = C - A C
    const CMatrix C = oracle::channel_covariance(los.a_M, 64, g.c, s.delta, s.epsilon, g.gamma);
    const oracle::MatrixLmmse ref = oracle::matrix_lmmse(C, rho);
    CHECK((m.A - ref.A).norm() < 1e-9 * ref.A.norm());
    CHECK(nmse_closed_form(m) == doctest::Approx(ref.nmse).epsilon(1e-9));
    CHECK(mse_trace_closed_form(m) == doctest::Approx(ref.error_cov.trace().real()).epsilon(1e-9));

    // B = (I - A) E{q}
    const CVector mean_q =
        std::sqrt(g.c * s.delta * s.epsilon) * los.H2_bar * phases.diagonal().cwiseProduct(los.h_bar);
    CHECK((m.B - (CMatrix::Identity(64, 64) - ref.A) * mean_q).norm() < 1e-9 * mean_q.norm());

    // structured application equals the materialised matrix
    const CVector x = CVector::Random(64);
    CHECK((m.apply_A(x) - m.A * x).norm() < 1e-12 * x.norm());
    CHECK(m.A.isApprox(m.A.adjoint(), 1e-14));
}

TEST_CASE("coefficient ranges over random scenarios") {
    RngStream rng(2024, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const int side_m = 1 + static_cast<int>(rng.uniform() * 8);
        const int side_n = 1 + static_cast<int>(rng.uniform() * 12);
        Scenario s = make(side_m * side_m, side_n * side_n, rng.uniform() * 20, rng.uniform() * 20, trial);
        s.p_dbm = -20 + 60 * rng.uniform();
        s.tau = 1 + static_cast<int>(rng.uniform() * 10);
        const LinkGains g = link_gains(s);
        const LosComponents los = los_components(s);
        const EstimatorModel m = build_estimator(s, g, los, PhaseShifts::zeros(s.N));
        CHECK(m.a4 > 0.0);
        CHECK(m.a4 < 1.0);
        CHECK(m.a3 >= 0.0);
        for (double e : {m.e1, m.e2, m.e3}) {
            CHECK(e >= 0.0);
            CHECK(e <= 1.0 + 1e-15);
        }
        const double nmse = nmse_closed_form(m);
        CHECK(nmse >= 0.0);
        CHECK(nmse <= 1.0);
    }
}

TEST_CASE("NMSE does not depend on the phases") {
    const Scenario s = make(16, 16);
    const LinkGains g = link_gains(s);
    const LosComponents los = los_components(s);
    const double ref = nmse_closed_form(build_estimator(s, g, los, PhaseShifts::zeros(16)));
    for (std::uint64_t k = 0; k < 10; ++k)
        CHECK(nmse_closed_form(build_estimator(s, g, los, random_phases(16, k))) == ref);
}

TEST_CASE("NMSE asymptotics and monotonicity") {
    Scenario s = make(16, 16);
    const LinkGains g = link_gains(s);
    const LosComponents los = los_components(s);

    // strictly decreasing in tau p
    double prev = 2.0;
    for (double p_dbm : {0.0, 10.0, 20.0, 30.0, 40.0, 60.0, 80.0}) {
        s.p_dbm = p_dbm;
        const double v = nmse_closed_form(build_estimator(s, g, los, PhaseShifts::zeros(16)));
        CHECK(v < prev);
        prev = v;
    }
    s.p_dbm = 200.0;
    CHECK(nmse_closed_form(build_estimator(s, g, los, PhaseShifts::zeros(16))) < 1e-12);

    // N -> infinity: NMSE -> 0, per-antenna MSE -> rho from below
    s = make(16, 16);
    double prev_nmse = 2.0, prev_mse = 0.0;
    for (int N : {16, 64, 256, 1024, 4096, 16384, 65536}) {
        s.N = N;
        const LinkGains gn = link_gains(s);
        const EstimatorModel m = build_estimator(s, gn, los_components(s), PhaseShifts::zeros(N));
        const double nmse = nmse_closed_form(m);
        const double per_antenna = mse_trace_closed_form(m) / 16.0;
        CHECK(nmse < prev_nmse);
        CHECK(per_antenna > prev_mse);
        CHECK(per_antenna < s.noise_ratio());
        prev_nmse = nmse;
        prev_mse = per_antenna;
    }
    CHECK(prev_nmse < 0.01);
    CHECK(prev_mse == doctest::Approx(s.noise_ratio()).epsilon(0.01));
}

TEST_CASE("degenerate zero-power channel") {
    EstimatorModel m;
    m.M = 4;
    m.noise_ratio = 1.0;
    CHECK_THROWS_AS(nmse_closed_form(m), Error);
    CHECK_THROWS_AS(mse_trace_closed_form(m), Error);
}

TEST_CASE("observation noise") {
    Scenario s = make(4, 4);
    const LinkGains g = link_gains(s);
    const LosComponents los = los_components(s);
    RngStream rng(1, 2);
    const ChannelSample smp = sample_channels(s, g, los, PhaseShifts::zeros(4), rng);

    Scenario quiet = s;
    quiet.sigma2_dbm = -std::numeric_limits<double>::infinity();
    CHECK(observe(smp, quiet, rng).y == smp.q);
    CHECK(ls_estimate(observe(smp, quiet, rng)) == smp.q);

    // empirical noise covariance; doubling tau halves the variance
    for (int tau : {1, 2}) {
        s.tau = tau;
        constexpr int kDraws = 100000;
        CMatrix cov = CMatrix::Zero(4, 4);
        for (int t = 0; t < kDraws; ++t) {
            RngStream r(5, 6, t);
            const CVector w = observe(smp, s, r).y - smp.q;
            cov += w * w.adjoint();
        }
        cov /= double(kDraws);
        const double rho = s.noise_ratio();
        for (int i = 0; i < 4; ++i) {
            CHECK(cov(i, i).real() == doctest::Approx(rho).epsilon(0.02));
            for (int j = 0; j < 4; ++j)
                if (i != j) CHECK(std::abs(cov(i, j)) < 0.02 * rho);
        }
    }
}

TEST_CASE("LMMSE beats LS and matches the closed forms empirically") {
    const Scenario s = make(4, 4);
    const LinkGains g = link_gains(s);
    const LosComponents los = los_components(s);
    const PhaseShifts phases = synthesize_align(los.h_bar, los.a_N);
    const EstimatorModel m = build_estimator(s, g, los, phases);

    McConfig mc;
    mc.trials = 10000;
    mc.seed = 17;
    mc.bootstrap_resamples = 50;
    const EmpiricalEstimation emp = empirical_estimation(s, g, los, m, phases, mc);
    CHECK(emp.mse_trace.mean < emp.ls_mse_trace.mean);
    CHECK(emp.ls_mse_trace.mean == doctest::Approx(4.0 * s.noise_ratio()).epsilon(0.02));
    CHECK(emp.nmse.estimate == doctest::Approx(nmse_closed_form(m)).epsilon(0.03));
    CHECK(emp.orthogonality < 0.02);
    CHECK(emp.nmse.ci_low <= emp.nmse.estimate);
    CHECK(emp.nmse.estimate <= emp.nmse.ci_high);
}

TEST_CASE("long pilots drive the estimation error to zero") {
    Scenario s = make(4, 4);
    s.tau_c = 1000000000;
    const LinkGains g = link_gains(s);
    const LosComponents los = los_components(s);
    const PhaseShifts phases = PhaseShifts::zeros(4);
    double prev = std::numeric_limits<double>::infinity();
    for (int tau : {1, 100, 10000, 1000000, 100000000}) {
        s.tau = tau;
        const EstimatorModel m = build_estimator(s, g, los, phases);
        RngStream rng(3, 4);
        const ChannelSample smp = sample_channels(s, g, los, phases, rng);
        const double err = (lmmse_estimate(m, observe(smp, s, rng)) - smp.q).norm() / smp.q.norm();
        CHECK(mse_trace_closed_form(m) < prev);
        prev = mse_trace_closed_form(m);
        if (tau == 100000000) CHECK(err < 1e-3);
    }
}

TEST_CASE("dimension checks") {
    const Scenario s = make(4, 4);
    const LinkGains g = link_gains(s);
    const LosComponents los = los_components(s);
    CHECK_THROWS_AS(build_estimator(s, g, los, PhaseShifts::zeros(9)), Error);
    const EstimatorModel m = build_estimator(s, g, los, PhaseShifts::zeros(4));
    Observation obs;
    obs.y = CVector::Zero(9);
    CHECK_THROWS_AS(lmmse_estimate(m, obs), Error);
}
