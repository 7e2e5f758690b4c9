#pragma once

#include <complex>
#include <vector>

#include "unruh2d/kinematics.hpp"
#include "unruh2d/oscillator.hpp"
#include "unruh2d/quadrature.hpp"

namespace unruh2d {

// Phase kinds of the interaction correction to the Wightman function:
//   UU  : |au/au'|^{+i w/a}     VV  : |av/av'|^{-i w/a}
//   UVp : |a^2 u v'|^{+i w/a}   UpV : |a^2 u' v|^{-i w/a}
enum class PhaseKind { UU, VV, UVp, UpV };

enum class ChiFactor { Chi, ChiConj };

// One surviving term after evaluating all step functions: a single chi or
// chi* under one thermal weight with phase e^{i w s}. Terms whose full
// bracket chi* + chi - 4 gamma |chi|^2 appears with all step factors equal
// to one cancel identically through the fluctuation-dissipation identity and
// are never emitted.
struct CorrelatorTerm {
    PhaseKind phase;
    ChiFactor chi;
    ThermalWeight weight;
    double log_phase;    // s such that the phase is e^{i w s}
    double coefficient;  // 1 for the Planckian block, 1/2 for the sinh block
};

const char* phase_kind_name(PhaseKind k);
const char* chi_factor_name(ChiFactor c);

struct CorrelatorResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    std::vector<CorrelatorTerm> terms_active;
    long evaluations = 0; // folded-integrand evaluations across all terms
};

// Step-function bookkeeping of Eq. (2.25) for a point pair. Throws for points
// on a horizon or within kLambdaTol of the trajectory. Empty for pairs that
// cannot be causally connected to the trajectory (both points in P u L).
std::vector<CorrelatorTerm> active_terms(const SpacetimePoint& p,
                                         const SpacetimePoint& pp,
                                         const ModelParams& params);

// G(p, p') - G_f(p, p'): the interaction correction to the field two-point
// function, computed by folded frequency quadrature of the active terms.
CorrelatorResult delta_two_point(const SpacetimePoint& p, const SpacetimePoint& pp,
                                 const ModelParams& params, const QuadratureSpec& spec);

struct CoincidenceResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

// Coincidence limit <phi^2> - <phi_0^2>: the static polarization cloud.
// Exactly zero for v < 0; elsewhere a function of a^2 u v and the side flags
// only. Uses the dedicated coincidence expression (the u<->u', v<->v' terms
// have already cancelled through the fluctuation-dissipation identity).
CoincidenceResult coincidence_delta_phi_sq_detail(const SpacetimePoint& p,
                                                  const ModelParams& params,
                                                  const QuadratureSpec& spec);

double coincidence_delta_phi_sq(const SpacetimePoint& p, const ModelParams& params,
                                const QuadratureSpec& spec);

} // namespace unruh2d
