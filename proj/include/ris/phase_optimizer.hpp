#pragma once

#include "ris/estimation.hpp"
#include "ris/rate_analysis.hpp"
#include "ris/types.hpp"

#include <string_view>

namespace ris {

enum class PhaseCase {
    Align,            // x0 <= 0
    Null,             // x0 >= N^2
    Compare,          // 0 < x0 < N^2, better endpoint
    AsymptoticAlign,  // large-N rule, always align
    PhaseIrrelevant,  // delta * eps = 0
};

std::string_view to_string(PhaseCase c) noexcept;

struct PhaseDecision {
    PhaseCase case_id = PhaseCase::Align;
    double x_star = 0.0;
    PhaseShifts phases;
    double achieved_snr = 0.0;
    SnrQuadratic quadratic;
};

/// theta_n = arg(a_N)_n - arg(h_bar)_n, so that f(Phi) = N.
PhaseShifts synthesize_align(const CVector& h_bar, const CVector& a_N);

/// Aligned phases plus 2pi n / N offsets; f(Phi) = 0. Requires N >= 2.
PhaseShifts synthesize_null(const CVector& h_bar, const CVector& a_N);

/// Statistical-CSI phase design from the SNR quadratic in x = |f|^2.
PhaseDecision optimize_phases(const Scenario& scenario, const LinkGains& gains,
                              const LosComponents& los);

/// Large-N rule: align regardless of x0.
PhaseDecision asymptotic_phases(const Scenario& scenario, const LinkGains& gains,
                                const LosComponents& los);

}  // namespace ris
