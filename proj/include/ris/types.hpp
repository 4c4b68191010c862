#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>

namespace ris {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

/// Angles of arrival/departure of the three LoS paths, in radians.
struct Angles {
    double user_ris_azimuth = 0.0;   // AoA at the RIS from the user
    double user_ris_elevation = 0.0;
    double ris_bs_azimuth = 0.0;     // AoD from the RIS towards the BS
    double ris_bs_elevation = 0.0;
    double bs_azimuth = 0.0;         // AoA at the BS from the RIS
    double bs_elevation = 0.0;
};

struct PathlossExponents {
    double user_ris = 2.0;
    double ris_bs = 2.5;
    double user_bs = 4.0;
};

/// Every deterministic system parameter of the single-user uplink.
///
/// Defaults are the reference deployment: a 64-antenna BS 700 m from a
/// 64-element RIS, with the user 20 m in front of the RIS.
struct Scenario {
    int M = 64;  // BS antennas (perfect square)
    int N = 64;  // RIS elements (perfect square)
    double p_dbm = 30.0;
    double sigma2_dbm = -104.0;
    int tau = 1;     // pilot length
    int tau_c = 196; // coherence interval
    double delta = 1.0;      // RIS-BS Rician factor
    double epsilon = 10.0;   // user-RIS Rician factor
    double d_ui = 20.0;      // user-RIS distance (m)
    double d_ib = 700.0;     // RIS-BS distance (m)
    double geometry_angle = kPi / 5.0;
    PathlossExponents pathloss_exponents{};
    double pathloss_ref = 1e-3;
    Angles angles{};
    double spacing_ratio = 0.5;  // d / lambda
    std::uint64_t seed = 1;

    /// Reference deployment with angles drawn deterministically from `seed`.
    static Scenario defaults(std::uint64_t seed = 1);

    double p_mw() const;
    double sigma2_mw() const;
    /// sigma^2 / (tau p), the post-despreading noise variance.
    double noise_ratio() const;
    double prelog() const { return double(tau_c - tau) / double(tau_c); }

    /// Throws Error{InvalidScenario | InvalidGeometry} on violated invariants.
    void validate() const;
};

/// Azimuth ~ U[0, 2pi), elevation ~ U[0, pi), from a stream keyed on `seed`.
Angles draw_angles(std::uint64_t seed);

struct LinkGains {
    double alpha = 0.0;  // user-RIS
    double beta = 0.0;   // RIS-BS
    double gamma = 0.0;  // user-BS
    double c = 0.0;      // beta alpha / ((delta+1)(epsilon+1))
    double d_ub = 0.0;   // derived user-BS distance (m)
};

/// Diagonal RIS reflection matrix, stored as its phases in [0, 2pi).
class PhaseShifts {
public:
    PhaseShifts() = default;
    explicit PhaseShifts(RVector theta);
    static PhaseShifts zeros(int n) { return PhaseShifts(RVector::Zero(n)); }

    int size() const { return static_cast<int>(theta_.size()); }
    const RVector& theta() const { return theta_; }
    /// Diagonal of Phi, e^{j theta_n}.
    CVector diagonal() const;

private:
    RVector theta_;
};

/// Wraps an angle into [0, 2pi).
double wrap_phase(double theta);

struct LosComponents {
    CVector h_bar;   // a_N(user->RIS AoA)
    CVector a_N;     // a_N(RIS->BS AoD)
    CVector a_M;     // a_M(BS AoA)
    CMatrix H2_bar;  // a_M a_N^H
};

struct ChannelSample {
    CVector d;   // user-BS
    CVector h;   // user-RIS
    CMatrix H2;  // RIS-BS
    CVector g;   // cascaded, H2 Phi h
    CVector q;   // overall, g + d
};

}  // namespace ris
