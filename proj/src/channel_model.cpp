#include "ris/channel_model.hpp"

#include "ris/error.hpp"

#include <cmath>
#include <string>

namespace ris {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidGeometry: return "invalid geometry";
    case ErrorKind::InvalidScenario: return "invalid scenario";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::UndefinedNmse: return "undefined NMSE";
    case ErrorKind::ScalingLawInapplicable: return "scaling law inapplicable";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::EmptyRun: return "empty run";
    case ErrorKind::InsufficientTrials: return "insufficient trials";
    case ErrorKind::Config: return "config error";
    }
    return "error";
}

double dbm_to_linear(double x_dbm) { return std::pow(10.0, x_dbm / 10.0); }

bool is_perfect_square(int x) {
    if (x < 1) return false;
    const int r = static_cast<int>(std::lround(std::sqrt(double(x))));
    return r * r == x;
}

double wrap_phase(double theta) {
    double w = std::fmod(theta, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    if (w >= 2.0 * kPi) w = 0.0;
    return w;
}

PhaseShifts::PhaseShifts(RVector theta) : theta_(std::move(theta)) {
    for (Eigen::Index i = 0; i < theta_.size(); ++i) theta_[i] = wrap_phase(theta_[i]);
}

CVector PhaseShifts::diagonal() const {
    CVector out(theta_.size());
    for (Eigen::Index i = 0; i < theta_.size(); ++i) out[i] = std::polar(1.0, theta_[i]);
    return out;
}

Angles draw_angles(std::uint64_t seed) {
    RngStream rng(seed, stream_key::kAngles);
    Angles a;
    a.user_ris_azimuth = 2.0 * kPi * rng.uniform();
    a.user_ris_elevation = kPi * rng.uniform();
    a.ris_bs_azimuth = 2.0 * kPi * rng.uniform();
    a.ris_bs_elevation = kPi * rng.uniform();
    a.bs_azimuth = 2.0 * kPi * rng.uniform();
    a.bs_elevation = kPi * rng.uniform();
    return a;
}

Scenario Scenario::defaults(std::uint64_t seed) {
    Scenario s;
    s.seed = seed;
    s.angles = draw_angles(seed);
    return s;
}

double Scenario::p_mw() const { return dbm_to_linear(p_dbm); }
double Scenario::sigma2_mw() const { return dbm_to_linear(sigma2_dbm); }
double Scenario::noise_ratio() const { return sigma2_mw() / (double(tau) * p_mw()); }

void Scenario::validate() const {
    if (!is_perfect_square(M)) throw Error(ErrorKind::InvalidGeometry, "M=" + std::to_string(M) + " is not a perfect square");
    if (!is_perfect_square(N)) throw Error(ErrorKind::InvalidGeometry, "N=" + std::to_string(N) + " is not a perfect square");
    if (tau < 1) throw Error(ErrorKind::InvalidScenario, "tau must be >= 1");
    if (tau >= tau_c) throw Error(ErrorKind::InvalidScenario, "tau must be < tau_c");
    if (!(delta >= 0.0) || !(epsilon >= 0.0)) throw Error(ErrorKind::InvalidScenario, "Rician factors must be >= 0");
    if (!(d_ui > 0.0) || !(d_ib > 0.0)) throw Error(ErrorKind::InvalidScenario, "distances must be > 0");
    if (!(spacing_ratio > 0.0)) throw Error(ErrorKind::InvalidScenario, "spacing_ratio must be > 0");
    if (!(pathloss_ref > 0.0)) throw Error(ErrorKind::InvalidScenario, "pathloss_ref must be > 0");
}

CVector steering_vector(int elements, double azimuth, double elevation, double spacing_ratio) {
    if (!is_perfect_square(elements))
        throw Error(ErrorKind::InvalidGeometry, "array size " + std::to_string(elements) + " is not a perfect square");
    if (!(spacing_ratio > 0.0)) throw Error(ErrorKind::InvalidGeometry, "spacing ratio must be > 0");

    const int side = static_cast<int>(std::lround(std::sqrt(double(elements))));
    const double row_phase = std::sin(elevation) * std::sin(azimuth);
    const double col_phase = std::cos(elevation);
    const double k = 2.0 * kPi * spacing_ratio;

    CVector a(elements);
    for (int i = 0; i < elements; ++i) {
        const int row = i / side;  // floor((x-1)/sqrt(X)) with x = i+1
        const int col = i % side;
        a[i] = std::polar(1.0, k * (row * row_phase + col * col_phase));
    }
    return a;
}

LosComponents los_components(const Scenario& s) {
    const Angles& ang = s.angles;
    LosComponents los;
    los.h_bar = steering_vector(s.N, ang.user_ris_azimuth, ang.user_ris_elevation, s.spacing_ratio);
    los.a_N = steering_vector(s.N, ang.ris_bs_azimuth, ang.ris_bs_elevation, s.spacing_ratio);
    los.a_M = steering_vector(s.M, ang.bs_azimuth, ang.bs_elevation, s.spacing_ratio);
    los.H2_bar = los.a_M * los.a_N.adjoint();
    return los;
}

LinkGains link_gains(const Scenario& s) {
    if (!(s.d_ui > 0.0) || !(s.d_ib > 0.0)) throw Error(ErrorKind::InvalidScenario, "distances must be > 0");
    LinkGains g;
    const double along = s.d_ib - s.d_ui * std::sin(s.geometry_angle);
    const double across = s.d_ui * std::cos(s.geometry_angle);
    g.d_ub = std::sqrt(along * along + across * across);
    g.alpha = s.pathloss_ref * std::pow(s.d_ui, -s.pathloss_exponents.user_ris);
    g.beta = s.pathloss_ref * std::pow(s.d_ib, -s.pathloss_exponents.ris_bs);
    g.gamma = s.pathloss_ref * std::pow(g.d_ub, -s.pathloss_exponents.user_bs);
    g.c = g.beta * g.alpha / ((s.delta + 1.0) * (s.epsilon + 1.0));
    return g;
}

CVector complex_normal_vector(RngStream& rng, int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.complex_normal();
    return v;
}

CMatrix complex_normal_matrix(RngStream& rng, int rows, int cols) {
    CMatrix m(rows, cols);
    // column-major fill order is part of the reproducibility contract
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
    return m;
}

namespace {

// sqrt(K) and sqrt(1) weights of the LoS/NLoS parts, stable for huge K.
std::pair<double, double> rician_weights(double k) {
    if (std::isinf(k)) return {1.0, 0.0};
    return {std::sqrt(k / (k + 1.0)), std::sqrt(1.0 / (k + 1.0))};
}

}  // namespace

ChannelSample sample_channels(const Scenario& s, const LinkGains& gains, const LosComponents& los,
                              const PhaseShifts& phases, RngStream& rng) {
    if (phases.size() != s.N || los.h_bar.size() != s.N || los.a_M.size() != s.M)
        throw Error(ErrorKind::DimensionMismatch, "scenario, LoS components and phases disagree");

    ChannelSample out;
    out.d = std::sqrt(gains.gamma) * complex_normal_vector(rng, s.M);

    const auto [h_los, h_nlos] = rician_weights(s.epsilon);
    out.h = std::sqrt(gains.alpha) * (h_los * los.h_bar + h_nlos * complex_normal_vector(rng, s.N));

    const auto [H_los, H_nlos] = rician_weights(s.delta);
    out.H2 = std::sqrt(gains.beta) * (H_los * los.H2_bar + H_nlos * complex_normal_matrix(rng, s.M, s.N));

    apply_phases(out, phases);
    return out;
}

CVector overall_channel(const ChannelSample& sample, const PhaseShifts& phases) {
    if (sample.H2.cols() != phases.size() || sample.h.size() != phases.size() ||
        sample.H2.rows() != sample.d.size())
        throw Error(ErrorKind::DimensionMismatch, "channel sample and phases disagree");
    const CVector reflected = phases.diagonal().cwiseProduct(sample.h);
    return sample.H2 * reflected + sample.d;
}

void apply_phases(ChannelSample& sample, const PhaseShifts& phases) {
    if (sample.H2.cols() != phases.size() || sample.h.size() != phases.size())
        throw Error(ErrorKind::DimensionMismatch, "channel sample and phases disagree");
    sample.g = sample.H2 * phases.diagonal().cwiseProduct(sample.h);
    sample.q = sample.g + sample.d;
}

}  // namespace ris
