#include "unruh2d/correlator.hpp"

#include <cmath>

namespace unruh2d {

namespace {

constexpr double kMaxLogPhase = 50.0; // |ln|x|| budget for the oscillatory phases

struct PointFlags {
    bool u_neg, u_pos; // theta(-u), theta(u)
    bool v_pos, v_neg; // theta(v), theta(-v)
    bool right, left;  // theta(-lambda), theta(lambda)
};

PointFlags flags_of(const SpacetimePoint& p, const ModelParams& params) {
    classify_region(p); // horizon check
    const SideInfo side = side_of_trajectory(p, params.a());
    if (side.side == TrajectorySide::OnTrajectory) {
        throw OnTrajectoryError("point lies on the accelerated trajectory");
    }
    PointFlags f;
    f.u_neg = p.u < 0.0;
    f.u_pos = p.u > 0.0;
    f.v_pos = p.v > 0.0;
    f.v_neg = p.v < 0.0;
    f.right = side.side == TrajectorySide::RightOfTrajectory;
    f.left = !f.right;
    return f;
}

double checked_log_phase(double x, double a) {
    const double l = std::log(std::abs(x));
    if (std::abs(l) > kMaxLogPhase) {
        throw RangeLimitError("phase argument |ln|x|| exceeds oscillation budget");
    }
    return l / a;
}

// Planckian-block bracket chi* s1 + chi s2 - 4 gamma |chi|^2 s1 s2. With step
// factors the only possibilities are empty, a single chi or chi*, or the full
// fluctuation-dissipation combination, which cancels identically and is never
// emitted. The phase is evaluated lazily so dead terms cost nothing.
template <typename PhaseFn>
void emit_planck(std::vector<CorrelatorTerm>& out, PhaseKind kind, bool step,
                 bool s1, bool s2, PhaseFn phase) {
    if (!step || (s1 && s2) || (!s1 && !s2)) {
        return;
    }
    const ChiFactor chi = s1 ? ChiFactor::ChiConj : ChiFactor::Chi;
    out.push_back({kind, chi, ThermalWeight::Planckian, phase(), 1.0});
}

// Sinh-block term; the chi* and chi sub-terms carry mutually exclusive step
// conditions.
template <typename PhaseFn>
void emit_sinh(std::vector<CorrelatorTerm>& out, PhaseKind kind, bool conj_flags,
               bool plain_flags, PhaseFn phase) {
    if (conj_flags) {
        out.push_back({kind, ChiFactor::ChiConj, ThermalWeight::CoshSinh, phase(), 0.5});
    }
    if (plain_flags) {
        out.push_back({kind, ChiFactor::Chi, ThermalWeight::CoshSinh, phase(), 0.5});
    }
}

// Envelope bound on the |omega| > omega_max * a truncation of one folded term.
// Planckian-block integrands decay like |chi|/omega^2 ~ 1/omega^3 times the
// phase; an oscillatory phase buys another 2/(|s| omega_0) by parts. The sinh
// block is exponentially small at the cutoff.
double tail_bound_for(const CorrelatorTerm& term, const ModelParams& params,
                      const QuadratureSpec& spec) {
    const double w0 = spec.omega_max * params.a();
    const double chi0 = std::abs(susceptibility(w0, params));
    double wfac;
    if (term.weight == ThermalWeight::Planckian) {
        wfac = 1.0 / std::tanh(M_PI * w0 / params.a());
    } else {
        wfac = std::abs(thermal_weight(ThermalWeight::CoshSinh, w0, params.a()));
    }
    const double direct = 2.0 * term.coefficient * chi0 * wfac;
    const double s = std::abs(term.log_phase);
    if (s * w0 > 2.0) {
        return direct * 2.0 / (s * w0);
    }
    return direct;
}

// Integrates the folded channels of one term. Returns the complex contribution
// before the overall -gamma/2pi prefactor.
std::complex<double> integrate_term(const CorrelatorTerm& term, const ModelParams& params,
                                    const QuadratureSpec& spec, double& error_acc,
                                    long& eval_acc, bool imag_channel = true) {
    const double a = params.a();
    const double s = term.log_phase;
    const bool conj = term.chi == ChiFactor::ChiConj;
    const double coeff = term.coefficient;
    const ThermalWeight kind = term.weight;

    auto f = [&params, a, s, conj, coeff, kind](double w) {
        std::complex<double> chi = susceptibility(w, params);
        if (conj) {
            chi = std::conj(chi);
        }
        const std::complex<double> phase(std::cos(w * s), std::sin(w * s));
        return coeff * thermal_weight(kind, w, a) * phase * chi / w;
    };

    const FoldedChannels ch = fold_integrand(f, a, kind);
    const double tail = tail_bound_for(term, params, spec);

    const IntegralResult re = integrate_omega(ch.re, spec, a, std::abs(s), tail);
    error_acc += re.error;
    eval_acc += re.evaluations;

    double im_value = 0.0;
    if (imag_channel && !ch.im_is_zero) {
        const IntegralResult im = integrate_omega(ch.im, spec, a, std::abs(s), tail);
        error_acc += im.error;
        eval_acc += im.evaluations;
        im_value = im.value;
    }
    return {re.value, im_value};
}

void check_spec_compatibility(const ModelParams& params, const QuadratureSpec& spec) {
    spec.validate();
    if (spec.omega_max * params.a() < 2.0 * params.omega0()) {
        throw ParameterError("omega_max must reach at least 2 omega0 for the tail bound");
    }
}

} // namespace

const char* phase_kind_name(PhaseKind k) {
    switch (k) {
        case PhaseKind::UU: return "uu'";
        case PhaseKind::VV: return "vv'";
        case PhaseKind::UVp: return "uv'";
        case PhaseKind::UpV: return "u'v";
    }
    return "?";
}

const char* chi_factor_name(ChiFactor c) {
    return c == ChiFactor::Chi ? "chi" : "chi*";
}

std::vector<CorrelatorTerm> active_terms(const SpacetimePoint& p,
                                         const SpacetimePoint& pp,
                                         const ModelParams& params) {
    const PointFlags x = flags_of(p, params);
    const PointFlags y = flags_of(pp, params);
    const double a = params.a();

    // Lazy log-phases; sign conventions follow the |...|^{+-i w/a} exponents.
    auto s_uu = [&] { return checked_log_phase(p.u / pp.u, a); };
    auto s_vv = [&] { return -checked_log_phase(p.v / pp.v, a); };
    auto s_uvp = [&] { return checked_log_phase(a * a * p.u * pp.v, a); };
    auto s_upv = [&] { return -checked_log_phase(a * a * pp.u * p.v, a); };

    std::vector<CorrelatorTerm> out;

    // Planckian block: bracket flags are (chi*: s1, chi: s2).
    emit_planck(out, PhaseKind::UU, x.u_neg && y.u_neg, x.right, y.right, s_uu);
    emit_planck(out, PhaseKind::VV, x.v_pos && y.v_pos, x.left, y.left, s_vv);
    emit_planck(out, PhaseKind::UVp, x.u_neg && y.v_pos, x.right, y.left, s_uvp);
    emit_planck(out, PhaseKind::UpV, y.u_neg && x.v_pos, x.left, y.right, s_upv);

    // Sinh block.
    emit_sinh(out, PhaseKind::UU, x.u_neg && x.right && y.u_pos,
              y.u_neg && y.right && x.u_pos, s_uu);
    emit_sinh(out, PhaseKind::VV, x.v_pos && x.left && y.v_neg,
              y.v_pos && y.left && x.v_neg, s_vv);
    emit_sinh(out, PhaseKind::UVp, x.u_neg && x.right && y.v_neg,
              y.v_pos && y.left && x.u_pos, s_uvp);
    emit_sinh(out, PhaseKind::UpV, y.u_pos && x.left && x.v_pos,
              y.u_neg && y.right && x.v_neg, s_upv);

    return out;
}

CorrelatorResult delta_two_point(const SpacetimePoint& p, const SpacetimePoint& pp,
                                 const ModelParams& params, const QuadratureSpec& spec) {
    check_spec_compatibility(params, spec);
    CorrelatorResult res;
    res.terms_active = active_terms(p, pp, params);
    if (res.terms_active.empty()) {
        return res; // exact zero, no quadrature
    }

    std::complex<double> sum{0.0, 0.0};
    double err = 0.0;
    for (const CorrelatorTerm& term : res.terms_active) {
        sum += integrate_term(term, params, spec, err, res.evaluations);
    }

    const double prefactor = -params.gamma() / (2.0 * M_PI);
    res.value = prefactor * sum;
    res.error_estimate = std::abs(prefactor) * err;
    return res;
}

CoincidenceResult coincidence_delta_phi_sq_detail(const SpacetimePoint& p,
                                                  const ModelParams& params,
                                                  const QuadratureSpec& spec) {
    check_spec_compatibility(params, spec);
    const PointFlags f = flags_of(p, params);
    CoincidenceResult res;
    if (!f.v_pos) {
        return res; // cloud confined to v > 0
    }

    const double a = params.a();
    const double s0 = checked_log_phase(a * a * p.u * p.v, a);

    // The surviving cross term and its conjugate partner sum to twice the real
    // part of one primitive; which primitive depends on side and sign of u.
    CorrelatorTerm term{};
    term.phase = PhaseKind::UVp;
    term.log_phase = s0;
    if (f.right) {
        term.chi = ChiFactor::ChiConj;
        term.weight = ThermalWeight::Planckian;
        term.coefficient = 1.0;
    } else if (f.u_neg) {
        term.chi = ChiFactor::Chi;
        term.weight = ThermalWeight::Planckian;
        term.coefficient = 1.0;
    } else {
        term.chi = ChiFactor::Chi;
        term.weight = ThermalWeight::CoshSinh;
        term.coefficient = 0.5;
    }

    double err = 0.0;
    const std::complex<double> k =
        integrate_term(term, params, spec, err, res.evaluations, /*imag_channel=*/false);
    const double prefactor = -params.gamma() / M_PI;
    res.value = prefactor * k.real();
    res.error_estimate = std::abs(prefactor) * err;
    return res;
}

double coincidence_delta_phi_sq(const SpacetimePoint& p, const ModelParams& params,
                                const QuadratureSpec& spec) {
    return coincidence_delta_phi_sq_detail(p, params, spec).value;
}

} // namespace unruh2d
