#include "ris/phase_optimizer.hpp"

#include "ris/error.hpp"

#include <cmath>

namespace ris {

std::string_view to_string(PhaseCase c) noexcept {
    switch (c) {
    case PhaseCase::Align: return "align";
    case PhaseCase::Null: return "null";
    case PhaseCase::Compare: return "compare";
    case PhaseCase::AsymptoticAlign: return "asymptotic-align";
    case PhaseCase::PhaseIrrelevant: return "phase-irrelevant";
    }
    return "unknown";
}

PhaseShifts synthesize_align(const CVector& h_bar, const CVector& a_N) {
    if (h_bar.size() != a_N.size()) throw Error(ErrorKind::DimensionMismatch, "h_bar and a_N differ in length");
    RVector theta(h_bar.size());
    for (Eigen::Index n = 0; n < h_bar.size(); ++n) theta[n] = std::arg(a_N[n]) - std::arg(h_bar[n]);
    return PhaseShifts(std::move(theta));
}

PhaseShifts synthesize_null(const CVector& h_bar, const CVector& a_N) {
    const Eigen::Index n_elems = h_bar.size();
    if (n_elems < 2) throw Error(ErrorKind::Infeasible, "|f| = 0 is unreachable with a single element");
    RVector theta = synthesize_align(h_bar, a_N).theta();
    // summands become the N-th roots of unity
    for (Eigen::Index n = 0; n < n_elems; ++n) theta[n] += 2.0 * kPi * double(n) / double(n_elems);
    return PhaseShifts(std::move(theta));
}

namespace {

PhaseDecision decide(const Scenario& s, const LinkGains& g, const LosComponents& los, bool asymptotic) {
    s.validate();
    // a/e coefficients do not depend on the phases
    const EstimatorModel model = build_estimator(s, g, los, PhaseShifts::zeros(s.N));

    PhaseDecision d;
    d.quadratic = snr_quadratic(s, g, model);
    const double x_max = double(s.N) * double(s.N);

    auto choose_align = [&](PhaseCase c) {
        d.case_id = c;
        d.x_star = x_max;
        d.phases = synthesize_align(los.h_bar, los.a_N);
    };
    auto choose_null = [&](PhaseCase c) {
        d.case_id = c;
        d.x_star = 0.0;
        d.phases = synthesize_null(los.h_bar, los.a_N);
    };

    if (d.quadratic.degenerate || s.N == 1) {
        // with one element |f| = 1 for every phase
        choose_align(PhaseCase::PhaseIrrelevant);
    } else if (asymptotic) {
        choose_align(PhaseCase::AsymptoticAlign);
    } else if (d.quadratic.x0 <= 0.0) {
        choose_align(PhaseCase::Align);
    } else if (d.quadratic.x0 >= x_max) {
        choose_null(PhaseCase::Null);
    } else if (d.quadratic.snr(x_max) >= d.quadratic.snr(0.0)) {
        choose_align(PhaseCase::Compare);
    } else {
        choose_null(PhaseCase::Compare);
    }

    d.achieved_snr = rate_lower_bound(s, g, los, model, d.phases).snr;
    return d;
}

}  // namespace

PhaseDecision optimize_phases(const Scenario& s, const LinkGains& g, const LosComponents& los) {
    return decide(s, g, los, false);
}

PhaseDecision asymptotic_phases(const Scenario& s, const LinkGains& g, const LosComponents& los) {
    return decide(s, g, los, true);
}

}  // namespace ris
