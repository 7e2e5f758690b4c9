#include "unruh2d/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace unruh2d {

namespace {

constexpr double kAdiabaticRate = 1e-8; // phase rate below which a mode is quiescent
constexpr double kBurnInOverGamma = 10.0;

using Cplx = std::complex<double>;

// Above this phase rate a mode is carried by the fast-phase asymptotic
// particular solution instead of time stepping; below it the phase advances
// less than ~0.1 rad per default step, well inside the integrator's accuracy.
double rate_switch(const ModelParams& p) { return 25.0 * (p.a() + p.omega0()); }

// Exponential-integrator weights for one step of x' = z x + d(t) with d
// linearly interpolated across the step: x+ = e^{zh} x + w0 d0 + w1 d1.
struct EtdWeights {
    Cplx decay;
    Cplx w0;
    Cplx w1;
};

EtdWeights etd_weights(Cplx z, double h) {
    const Cplx e = std::exp(z * h);
    const Cplx phi1 = (e - 1.0) / z;
    const Cplx phi2 = (e - 1.0 - z * h) / (z * z * h);
    return EtdWeights{e, phi1 - phi2, phi2};
}

// Integrating the retarded convolution q = -(e/Omega) int sin(Omega dt) e^{-gamma dt}
// dphi/ds by parts (the boundary terms vanish) gives
//   q(tau) = (e/Omega) [ -(Omega + i gamma)/2 A - (Omega - i gamma)/2 B ],
// with A, B accumulating phi against e^{z+- dt}, z+- = -gamma +- i Omega. A
// constant phi yields exactly zero (A = -phi/z+, B = -phi/z-).
Cplx q_from_states(Cplx A, Cplx B, const ModelParams& p) {
    const Cplx cp(-0.5 * p.omega(), -0.5 * p.gamma());
    const Cplx cm(-0.5 * p.omega(), 0.5 * p.gamma());
    return (p.coupling() / p.omega()) * (cp * A + cm * B);
}

// Asymptotic particular solution of A(s) = int_-inf^s e^{z(s-u)} e^{i phi(u)} du
// for a fast phase, by repeated integration by parts:
//   A = m [ 1/(i phi') + (z - c)/(i phi')^2 + (z - c)(z - 2c)/(i phi')^3 ],
// with phi' = -rate and c = phi''/phi' (+a for k > 0, -a for k < 0). The
// truncation is relatively O(|z - 3c|^3 / rate^3).
Cplx ibp_state(Cplx m, double rate, double c, Cplx z) {
    const Cplx ip(0.0, -rate); // i phi'
    const Cplx t1 = m / ip;
    const Cplx t2 = t1 * (z - c) / ip;
    const Cplx t3 = t2 * (z - 2.0 * c) / ip;
    return t1 + t2 + t3;
}

} // namespace

ModeSet ModeSet::make(double box_length, int n_modes) {
    if (!(box_length > 0.0) || n_modes < 1) {
        throw ParameterError("mode set requires box_length > 0 and n_modes >= 1");
    }
    ModeSet m;
    m.box_length = box_length;
    m.n_modes = n_modes;
    const double dk = 2.0 * M_PI / box_length;
    m.k = dk * Eigen::ArrayXd::LinSpaced(n_modes, 1.0, static_cast<double>(n_modes));
    m.omega = m.k;
    m.weight = 1.0 / (2.0 * m.omega * box_length);
    return m;
}

ModeSet ModeSet::make_refined(double box_length, int n_modes, const ModelParams& params) {
    if (!(box_length > 0.0) || n_modes < 65) {
        throw ParameterError("refined mode set requires box_length > 0 and n_modes > 64");
    }
    const double a = params.a();
    const double dk = 2.0 * M_PI / box_length;

    // Box cells below k_dense undersample the e^{-i (Omega/a) ln k} ring
    // oscillation; replace them by a trapezoid in x = ln k, deep enough that
    // the remaining (k/Omega)^{gamma/a} ring weight is negligible.
    const int n_dense = 64;
    const double k_dense = n_dense * dk;
    const double x_seam = std::log(k_dense - 0.5 * dk); // left edge of cell n_dense
    const double x_min =
        std::log(params.omega()) + (a / params.gamma()) * std::log(3e-4);
    const double period = 2.0 * M_PI * a / params.omega();
    const double hx = std::min(0.1, period / 20.0);
    const int n_log = static_cast<int>(std::ceil((x_seam - x_min) / hx)) + 1;
    const double h = (x_seam - x_min) / (n_log - 1);

    ModeSet m;
    m.box_length = box_length;
    m.n_modes = n_log + (n_modes - n_dense + 1);
    m.k.resize(m.n_modes);
    m.weight.resize(m.n_modes);
    for (int j = 0; j < n_log; ++j) {
        const double x = x_min + h * j;
        m.k[j] = std::exp(x);
        const double tw = (j == 0 || j == n_log - 1) ? 0.5 : 1.0;
        m.weight[j] = tw * h / (4.0 * M_PI);
    }
    for (int n = n_dense; n <= n_modes; ++n) {
        const int j = n_log + n - n_dense;
        m.k[j] = n * dk;
        m.weight[j] = 1.0 / (2.0 * m.k[j] * box_length);
    }
    m.omega = m.k;
    return m;
}

Eigen::ArrayXcd response_to_field(const std::function<Cplx(double)>& phi,
                                  const ModelParams& params, const TauGrid& grid) {
    if (grid.n < 2 || !(grid.dtau > 0.0)) {
        throw ParameterError("tau grid requires n >= 2 and dtau > 0");
    }
    const Cplx zp(-params.gamma(), params.omega());
    const Cplx zm = std::conj(zp);
    const EtdWeights wp = etd_weights(zp, grid.dtau);
    const EtdWeights wm{std::conj(wp.decay), std::conj(wp.w0), std::conj(wp.w1)};

    Eigen::ArrayXcd q(grid.n);
    // Start on the constant-field steady state at the grid edge.
    Cplx d0 = phi(grid.at(0));
    Cplx A = -d0 / zp;
    Cplx B = -d0 / zm;
    q[0] = q_from_states(A, B, params);
    for (long i = 1; i < grid.n; ++i) {
        const Cplx d1 = phi(grid.at(i));
        A = wp.decay * A + wp.w0 * d0 + wp.w1 * d1;
        B = wm.decay * B + wm.w0 * d0 + wm.w1 * d1;
        d0 = d1;
        q[i] = q_from_states(A, B, params);
    }
    return q;
}

DriveWindow mode_drive_window(double k, const ModelParams& params) {
    const double a = params.a();
    const double sw = rate_switch(params);
    if (k > 0.0) {
        // rate = k e^{-a s} falls from fast through resonance to quiescence.
        return DriveWindow{std::log(k / sw) / a, std::log(k / kAdiabaticRate) / a};
    }
    const double kk = -k;
    // rate = |k| e^{a s} grows from quiescence through resonance to fast.
    return DriveWindow{std::log(kAdiabaticRate / kk) / a, std::log(sw / kk) / a};
}

namespace {

struct ModePhase {
    Cplx m;      // e^{i phi}
    double rate; // |dphi/dtau|
};

ModePhase mode_phase(double k, double a, double tau) {
    // k > 0: phi = +(k/a) e^{-a tau};  k < 0: phi = (k/a) e^{+a tau} < 0.
    double phi;
    double rate;
    if (k > 0.0) {
        rate = k * std::exp(-a * tau);
        phi = rate / a;
    } else {
        rate = -k * std::exp(a * tau);
        phi = -rate / a;
    }
    return ModePhase{Cplx(std::cos(phi), std::sin(phi)), rate};
}

} // namespace

Eigen::ArrayXcd mode_q_response(double k, const ModelParams& params, const TauGrid& grid,
                                double tau_eval_min) {
    if (grid.tau_min > tau_eval_min - kBurnInOverGamma / params.gamma()) {
        throw ContractError("mode_q_response: grid provides less than 10/gamma of burn-in");
    }
    const double a = params.a();
    const double sw = rate_switch(params);
    const double c = k > 0.0 ? a : -a;
    const Cplx zp(-params.gamma(), params.omega());
    const Cplx zm = std::conj(zp);
    const EtdWeights wp = etd_weights(zp, grid.dtau);
    const EtdWeights wm{std::conj(wp.decay), std::conj(wp.w0), std::conj(wp.w1)};

    Eigen::ArrayXcd q(grid.n);
    bool tracking = false;
    bool retired = false; // k < 0 only: past the fast-phase switch
    Cplx A{}, B{}, d0{};

    for (long i = 0; i < grid.n; ++i) {
        const ModePhase mp = mode_phase(k, a, grid.at(i));
        if (!tracking && !retired) {
            if (mp.rate <= sw) {
                // Enter tracking: fast-phase asymptotics (k > 0, coming down
                // through the switch) or quiescent steady state.
                if (mp.rate > 100.0 * kAdiabaticRate) {
                    A = ibp_state(mp.m, mp.rate, c, zp);
                    B = ibp_state(mp.m, mp.rate, c, zm);
                } else {
                    A = -mp.m / zp;
                    B = -mp.m / zm;
                }
                d0 = mp.m;
                tracking = true;
            }
        } else if (tracking && i > 0) {
            A = wp.decay * A + wp.w0 * d0 + wp.w1 * mp.m;
            B = wm.decay * B + wm.w0 * d0 + wm.w1 * mp.m;
            d0 = mp.m;
            if (mp.rate > sw) {
                // k < 0 accelerating out of resolution: keep only the ringing
                // part and continue it homogeneously.
                A -= ibp_state(mp.m, mp.rate, c, zp);
                B -= ibp_state(mp.m, mp.rate, c, zm);
                tracking = false;
                retired = true;
            }
        } else if (retired && i > 0) {
            A *= wp.decay;
            B *= wm.decay;
        }

        if (tracking) {
            q[i] = q_from_states(A, B, params);
        } else if (retired) {
            q[i] = q_from_states(A + ibp_state(mp.m, mp.rate, c, zp),
                                 B + ibp_state(mp.m, mp.rate, c, zm), params);
        } else {
            // Fast era before tracking: pure particular solution.
            q[i] = q_from_states(ibp_state(mp.m, mp.rate, c, zp),
                                 ibp_state(mp.m, mp.rate, c, zm), params);
        }
    }
    return q;
}

std::complex<double> mode_phi_int(double k, const SpacetimePoint& p,
                                  const ModelParams& params, const TauGrid& grid,
                                  const Eigen::ArrayXcd& q_samples) {
    if (q_samples.size() != grid.n) {
        throw ContractError("mode_phi_int: sample array does not match the grid");
    }
    classify_region(p); // horizon check
    const SideInfo side = side_of_trajectory(p, params.a());
    if (side.side == TrajectorySide::OnTrajectory) {
        throw OnTrajectoryError("mode_phi_int: point on the trajectory");
    }

    auto sample = [&](double tau) {
        const double x = (tau - grid.tau_min) / grid.dtau;
        const long i = static_cast<long>(std::floor(x));
        if (i < 0 || i + 1 >= grid.n) {
            throw ContractError("mode_phi_int: retarded time outside the tau grid");
        }
        const double f = x - static_cast<double>(i);
        return (1.0 - f) * q_samples[i] + f * q_samples[i + 1];
    };

    Cplx out(0.0, 0.0);
    const double half_e = 0.5 * params.coupling();
    if (p.u < 0.0 && side.lambda < 0.0) {
        out += half_e * sample(retarded_time_right(p.u, params.a()));
    }
    if (p.v > 0.0 && side.lambda > 0.0) {
        out += half_e * sample(retarded_time_left(p.v, params.a()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Batch evaluator
// ---------------------------------------------------------------------------

OracleEvaluator::OracleEvaluator(const ModelParams& params, const ModeSet& modes,
                                 const std::vector<SpacetimePoint>& points, double dtau)
    : params_(params), modes_(modes), dtau_(dtau) {
    if (!(dtau > 0.0)) {
        throw ParameterError("oracle evaluator requires dtau > 0");
    }
    if (rate_switch(params_) * dtau_ > 0.15) {
        throw ParameterError("oracle evaluator: dtau too coarse for the phase switch");
    }

    std::vector<double> times;
    for (const SpacetimePoint& p : points) {
        classify_region(p);
        const SideInfo side = side_of_trajectory(p, params_.a());
        if (side.side == TrajectorySide::OnTrajectory) {
            throw OnTrajectoryError("oracle evaluator: point on the trajectory");
        }
        PointData d;
        d.right_active = p.u < 0.0 && side.lambda < 0.0;
        d.left_active = p.v > 0.0 && side.lambda > 0.0;
        if (d.right_active) {
            times.push_back(retarded_time_right(p.u, params_.a()));
        }
        if (d.left_active) {
            times.push_back(retarded_time_left(p.v, params_.a()));
        }
        points_.emplace_back(p, d);
    }

    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    if (!times.empty()) {
        run(times);
    }

    // Attach snapshot indices.
    auto index_of = [&times](double t) {
        const auto it = std::lower_bound(times.begin(), times.end(), t);
        return static_cast<int>(it - times.begin());
    };
    for (auto& [p, d] : points_) {
        if (d.right_active) {
            d.snap_u = index_of(retarded_time_right(p.u, params_.a()));
        }
        if (d.left_active) {
            d.snap_v = index_of(retarded_time_left(p.v, params_.a()));
        }
    }
}

// Mode lifecycle, vectorized over the ascending wavenumber array. Positive
// block: quiescent-fast -> (IBP entry) tracked -> (retire) homogeneous ring.
// Negative block: quiescent-slow -> (steady entry) tracked -> (IBP exit)
// homogeneous ring + fast particular. At every stage the contiguity of the
// tracked index range follows from the monotonicity of the phase rate in k.
void OracleEvaluator::run(const std::vector<double>& times) {
    const double a = params_.a();
    const int n = modes_.n_modes;
    const double sw = rate_switch(params_);
    const double k_min = modes_.k[0];
    const double k_max = modes_.k[n - 1];

    const double eval_min = times.front();

    double begin = std::min(std::log(k_min / sw) / a,               // pos entry
                            std::log(kAdiabaticRate / k_max) / a) - // neg entry
                   1.0 / a;
    begin = std::max(begin, eval_min - 15.0 / params_.gamma());
    begin = std::min(begin, eval_min - 1.0 / a);

    const Cplx zp(-params_.gamma(), params_.omega());
    const Cplx zm = std::conj(zp);
    const Cplx cp(-0.5 * params_.omega(), -0.5 * params_.gamma());
    const Cplx cm(-0.5 * params_.omega(), 0.5 * params_.gamma());
    const double efac = params_.coupling() / params_.omega();

    Eigen::ArrayXcd Ap = Eigen::ArrayXcd::Zero(n), Bp = Eigen::ArrayXcd::Zero(n);
    Eigen::ArrayXcd An = Eigen::ArrayXcd::Zero(n), Bn = Eigen::ArrayXcd::Zero(n);
    Eigen::ArrayXcd dp0 = Eigen::ArrayXcd::Zero(n), dn0 = Eigen::ArrayXcd::Zero(n);

    // Tracked ranges: positive block [p_lo, p_hi), negative block [n_lo, n_hi).
    // Retired ranges: positive [0, p_lo) (rings only), negative [n_hi, n) (rings
    // + fast particular). p_* grow monotonically; n_* shrink monotonically.
    int p_lo = 0, p_hi = 0;
    int n_lo = n, n_hi = n;

    auto pos_phase = [&](double s, int lo, int len, Eigen::ArrayXcd& out) {
        const double er = std::exp(-a * s) / a;
        const Eigen::ArrayXd ph = modes_.k.segment(lo, len) * er;
        out.segment(lo, len).real() = ph.cos();
        out.segment(lo, len).imag() = ph.sin();
    };
    auto neg_phase = [&](double s, int lo, int len, Eigen::ArrayXcd& out) {
        const double el = std::exp(a * s) / a;
        const Eigen::ArrayXd ph = modes_.k.segment(lo, len) * el;
        out.segment(lo, len).real() = ph.cos();
        out.segment(lo, len).imag() = -ph.sin();
    };

    auto upper_index = [&](double kv) {
        const double* base = modes_.k.data();
        return static_cast<int>(std::upper_bound(base, base + n, kv) - base);
    };

    // Fresh IBP particular states for a contiguous segment.
    auto ibp_segment = [&](bool positive, double s, int lo, int len, Eigen::ArrayXcd& sa,
                           Eigen::ArrayXcd& sb) {
        if (len <= 0) {
            return;
        }
        Eigen::ArrayXcd m(n);
        const double c = positive ? a : -a;
        if (positive) {
            pos_phase(s, lo, len, m);
        } else {
            neg_phase(s, lo, len, m);
        }
        const double ex = positive ? std::exp(-a * s) : std::exp(a * s);
        for (int j = lo; j < lo + len; ++j) {
            const double rate = modes_.k[j] * ex;
            sa[j] = ibp_state(m[j], rate, c, zp);
            sb[j] = ibp_state(m[j], rate, c, zm);
        }
    };

    double t = begin;
    auto advance_to = [&](double target) {
        while (t < target) {
            const double t1 = std::min(t + dtau_, target);
            const double h = t1 - t;
            const EtdWeights wp = etd_weights(zp, h);
            const EtdWeights wm{std::conj(wp.decay), std::conj(wp.w0), std::conj(wp.w1)};

            // --- positive block bookkeeping at step start ---
            const int new_p_hi = std::max(p_hi, upper_index(sw * std::exp(a * t)));
            if (new_p_hi > p_hi) { // enter tracking with the fast particular
                ibp_segment(true, t, p_hi, new_p_hi - p_hi, Ap, Bp);
                pos_phase(t, p_hi, new_p_hi - p_hi, dp0);
                p_hi = new_p_hi;
            }
            const int new_p_lo =
                std::max(p_lo, std::min(p_hi, upper_index(kAdiabaticRate * std::exp(a * t))));
            if (new_p_lo > p_lo) {
                // Retire into pure ring: the quiescent particular -m/z carries
                // no response, so only the state relative to it is kept.
                Eigen::ArrayXcd m(n);
                pos_phase(t, p_lo, new_p_lo - p_lo, m);
                Ap.segment(p_lo, new_p_lo - p_lo) += m.segment(p_lo, new_p_lo - p_lo) / zp;
                Bp.segment(p_lo, new_p_lo - p_lo) += m.segment(p_lo, new_p_lo - p_lo) / zm;
                p_lo = new_p_lo;
            }

            // --- negative block bookkeeping at step start ---
            const int new_n_lo =
                std::min(n_lo, upper_index(kAdiabaticRate * std::exp(-a * t)));
            if (new_n_lo < n_lo) { // enter tracking from quiescence
                Eigen::ArrayXcd m(n);
                neg_phase(t, new_n_lo, n_lo - new_n_lo, m);
                An.segment(new_n_lo, n_lo - new_n_lo) = -m.segment(new_n_lo, n_lo - new_n_lo) / zp;
                Bn.segment(new_n_lo, n_lo - new_n_lo) = -m.segment(new_n_lo, n_lo - new_n_lo) / zm;
                neg_phase(t, new_n_lo, n_lo - new_n_lo, dn0);
                n_lo = new_n_lo;
            }
            const int new_n_hi =
                std::min(n_hi, std::max(n_lo, upper_index(sw * std::exp(-a * t))));
            if (new_n_hi < n_hi) {
                // Accelerated out of resolution: strip the fast particular,
                // keep the ring.
                Eigen::ArrayXcd sa(n), sb(n);
                ibp_segment(false, t, new_n_hi, n_hi - new_n_hi, sa, sb);
                An.segment(new_n_hi, n_hi - new_n_hi) -= sa.segment(new_n_hi, n_hi - new_n_hi);
                Bn.segment(new_n_hi, n_hi - new_n_hi) -= sb.segment(new_n_hi, n_hi - new_n_hi);
                n_hi = new_n_hi;
            }

            // --- advance one step ---
            if (p_hi > p_lo) {
                const int len = p_hi - p_lo;
                Eigen::ArrayXcd d1(n);
                pos_phase(t1, p_lo, len, d1);
                Ap.segment(p_lo, len) = wp.decay * Ap.segment(p_lo, len) +
                                        wp.w0 * dp0.segment(p_lo, len) +
                                        wp.w1 * d1.segment(p_lo, len);
                Bp.segment(p_lo, len) = wm.decay * Bp.segment(p_lo, len) +
                                        wm.w0 * dp0.segment(p_lo, len) +
                                        wm.w1 * d1.segment(p_lo, len);
                dp0.segment(p_lo, len) = d1.segment(p_lo, len);
            }
            if (p_lo > 0) { // rings
                Ap.head(p_lo) *= wp.decay;
                Bp.head(p_lo) *= wm.decay;
            }
            if (n_hi > n_lo) {
                const int len = n_hi - n_lo;
                Eigen::ArrayXcd d1(n);
                neg_phase(t1, n_lo, len, d1);
                An.segment(n_lo, len) = wp.decay * An.segment(n_lo, len) +
                                        wp.w0 * dn0.segment(n_lo, len) +
                                        wp.w1 * d1.segment(n_lo, len);
                Bn.segment(n_lo, len) = wm.decay * Bn.segment(n_lo, len) +
                                        wm.w0 * dn0.segment(n_lo, len) +
                                        wm.w1 * d1.segment(n_lo, len);
                dn0.segment(n_lo, len) = d1.segment(n_lo, len);
            }
            if (n_hi < n) { // rings
                An.tail(n - n_hi) *= wp.decay;
                Bn.tail(n - n_hi) *= wm.decay;
            }
            t = t1;
        }
    };

    for (double target : times) {
        advance_to(target);

        // Assemble q for both blocks at the snapshot time.
        Eigen::ArrayXcd qp(n), qn(n);
        qp = efac * (cp * Ap + cm * Bp);
        qn = efac * (cp * An + cm * Bn);
        if (p_hi < n) { // still-fast positive modes: pure particular
            Eigen::ArrayXcd sa(n), sb(n);
            ibp_segment(true, t, p_hi, n - p_hi, sa, sb);
            qp.segment(p_hi, n - p_hi) =
                efac * (cp * sa.segment(p_hi, n - p_hi) + cm * sb.segment(p_hi, n - p_hi));
        }
        if (n_lo > 0) { // quiescent negative modes
            qn.head(n_lo).setZero();
        }
        if (n_hi < n) { // retired negative modes: ring + fast particular
            Eigen::ArrayXcd sa(n), sb(n);
            ibp_segment(false, t, n_hi, n - n_hi, sa, sb);
            qn.segment(n_hi, n - n_hi) +=
                efac * (cp * sa.segment(n_hi, n - n_hi) + cm * sb.segment(n_hi, n - n_hi));
        }
        qpos_.push_back(qp);
        qneg_.push_back(qn);
    }
}

Eigen::ArrayXcd OracleEvaluator::phi_int_modes(const PointData& d) const {
    const int n = modes_.n_modes;
    Eigen::ArrayXcd phi = Eigen::ArrayXcd::Zero(2 * n);
    const double half_e = 0.5 * params_.coupling();
    if (d.right_active) {
        phi.head(n) += half_e * qpos_[d.snap_u];
        phi.tail(n) += half_e * qneg_[d.snap_u];
    }
    if (d.left_active) {
        phi.head(n) += half_e * qpos_[d.snap_v];
        phi.tail(n) += half_e * qneg_[d.snap_v];
    }
    return phi;
}

Eigen::ArrayXcd OracleEvaluator::free_modes(const SpacetimePoint& p) const {
    // Massless null movers: f_k = e^{-i k u} for k > 0, e^{-i |k| v} for k < 0.
    const int n = modes_.n_modes;
    Eigen::ArrayXcd f(2 * n);
    const Eigen::ArrayXd pu = modes_.k * p.u;
    const Eigen::ArrayXd pv = modes_.k * p.v;
    f.head(n).real() = pu.cos();
    f.head(n).imag() = -pu.sin();
    f.tail(n).real() = pv.cos();
    f.tail(n).imag() = -pv.sin();
    return f;
}

const OracleEvaluator::PointData& OracleEvaluator::lookup(const SpacetimePoint& p) const {
    for (const auto& [q, d] : points_) {
        if (q.u == p.u && q.v == p.v) {
            return d;
        }
    }
    throw ContractError("oracle evaluator: point was not registered at construction");
}

std::complex<double> OracleEvaluator::two_point(const SpacetimePoint& p,
                                                const SpacetimePoint& q) const {
    const PointData& dp = lookup(p);
    const PointData& dq = lookup(q);
    if (!dp.right_active && !dp.left_active && !dq.right_active && !dq.left_active) {
        return {0.0, 0.0}; // neither point is causally tied to the trajectory
    }

    const int n = modes_.n_modes;
    const Eigen::ArrayXcd fp = free_modes(p);
    const Eigen::ArrayXcd fq = free_modes(q);
    const Eigen::ArrayXcd ip = phi_int_modes(dp);
    const Eigen::ArrayXcd iq = phi_int_modes(dq);

    // Sum w_k [ f(p) conj(phi(q)) + phi(p) conj(f(q)) + phi(p) conj(phi(q)) ],
    // positive block first, then the mirror block, in fixed index order.
    Eigen::ArrayXcd summand =
        fp * iq.conjugate() + ip * fq.conjugate() + ip * iq.conjugate();
    Cplx acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        acc += modes_.weight[i] * summand[i];
    }
    for (int i = 0; i < n; ++i) {
        acc += modes_.weight[i] * summand[n + i];
    }
    return acc;
}

std::complex<double> oracle_two_point(const SpacetimePoint& p, const SpacetimePoint& q,
                                      const ModelParams& params, const ModeSet& modes,
                                      double dtau) {
    OracleEvaluator eval(params, modes, {p, q}, dtau);
    return eval.two_point(p, q);
}

// ---------------------------------------------------------------------------
// Trajectory noise spectrum
// ---------------------------------------------------------------------------

namespace {

// Sine integral, |error| < 1e-12 over the range used here.
double sine_integral(double x) {
    const double ax = std::abs(x);
    double si;
    if (ax <= 4.0) {
        // Power series sum (-1)^n x^{2n+1} / ((2n+1)(2n+1)!).
        double term = ax;
        double sum = ax;
        for (int n = 1; n < 40; ++n) {
            term *= -ax * ax / (2.0 * n * (2.0 * n + 1.0));
            sum += term / (2.0 * n + 1.0);
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        si = sum;
    } else {
        // Si(x) = pi/2 - f cos x - g sin x with the auxiliary Laplace integrals
        // f = int e^{-x t}/(1+t^2), g = int t e^{-x t}/(1+t^2), evaluated by
        // composite Gauss on the substituted variable tau = x t.
        static const double gl7n[4] = {0.0, 0.4058451513773972, 0.7415311855993944,
                                       0.9491079123427585};
        static const double gl7w[4] = {0.4179591836734694, 0.3818300505051189,
                                       0.2797053914892767, 0.1294849661688697};
        double f = 0.0, g = 0.0;
        const int panels = 25;
        const double span = 50.0;
        for (int p = 0; p < panels; ++p) {
            const double lo = span * p / panels;
            const double hi = span * (p + 1) / panels;
            const double c = 0.5 * (lo + hi);
            const double h = 0.5 * (hi - lo);
            for (int i = 0; i < 4; ++i) {
                for (int sgn : {-1, 1}) {
                    if (i == 0 && sgn == 1) {
                        continue;
                    }
                    const double tau = c + sgn * h * gl7n[i];
                    const double tt = tau / ax;
                    const double w = gl7w[i] * h * std::exp(-tau) / (1.0 + tt * tt);
                    f += w;
                    g += w * tt;
                }
            }
        }
        f /= ax;
        g /= ax;
        si = M_PI / 2.0 - f * std::cos(ax) - g * std::sin(ax);
    }
    return x >= 0.0 ? si : -si;
}

// int_T^inf cos(w d) / d^2 dd = cos(w T)/T - |w| (pi/2 - Si(|w| T)).
double cosine_tail_over_sq(double w, double T) {
    const double aw = std::abs(w);
    if (aw == 0.0) {
        return 1.0 / T;
    }
    return std::cos(aw * T) / T - aw * (M_PI / 2.0 - sine_integral(aw * T));
}

// Exact small-separation difference (1/2pi) [1/d^2 - (a^2/4)/sinh^2(a d/2)].
double delta_c_exact(double dlt, double a) {
    const double x = 0.5 * a * dlt;
    if (std::abs(x) < 1e-2) {
        const double x2 = x * x;
        return (a * a / (8.0 * M_PI)) * (1.0 / 3.0 - x2 / 15.0 + 2.0 * x2 * x2 / 189.0);
    }
    const double sh = std::sinh(x);
    return (1.0 / (2.0 * M_PI)) * (1.0 / (dlt * dlt) - 0.25 * a * a / (sh * sh));
}

} // namespace

Eigen::ArrayXd oracle_noise_spectrum(const ModelParams& params, const ModeSet& modes,
                                     const std::vector<double>& omega_grid,
                                     const SpectrumSpec& spec) {
    const double a = params.a();
    const int n_modes = modes.n_modes;
    const double k_max = modes.k[n_modes - 1];
    const double T = spec.window / a;
    const double d = spec.dstep / a;
    const long n = 2 * std::lround(0.5 * T / d); // even interval count for Simpson
    const double h = T / static_cast<double>(n);

    // Smooth UV taper of the mode weights; kills sharp-cutoff ringing while
    // leaving the physical band untouched and preserving the +-omega ratio.
    const double kt = spec.taper_fraction * k_max;
    const int tp = spec.taper_power;
    auto taper = [kt, tp](double k) { return std::exp(-std::pow(k / kt, tp)); };
    // Per-mode coefficient of e^{-i k S}: both signs of k contribute equally,
    // so C(dlt) = sum 2 w_k k^2 rho(k) e^{-i k S(dlt)}.
    Eigen::ArrayXd kw(n_modes);
    for (int i = 0; i < n_modes; ++i) {
        kw[i] = 2.0 * modes.weight[i] * modes.k[i] * modes.k[i] * taper(modes.k[i]);
    }

    // Continuum completion of the taper on short separations:
    // M(dlt) = dC_exact(dlt) - (1/2pi) int rho(k) k (e^{-i k S} - e^{-i k dlt}) dk.
    const double k_hi = 1.7 * kt;
    auto delta_c_taper_cont = [&](double dlt, double S) {
        static const double gl7n[4] = {0.0, 0.4058451513773972, 0.7415311855993944,
                                       0.9491079123427585};
        static const double gl7w[4] = {0.4179591836734694, 0.3818300505051189,
                                       0.2797053914892767, 0.1294849661688697};
        const int panels =
            std::max(8, static_cast<int>(std::ceil(k_hi * std::max(S, dlt) / 4.0)));
        Cplx acc(0.0, 0.0);
        for (int p = 0; p < panels; ++p) {
            const double lo = k_hi * p / panels;
            const double hi = k_hi * (p + 1) / panels;
            const double c = 0.5 * (lo + hi);
            const double hw = 0.5 * (hi - lo);
            for (int i = 0; i < 4; ++i) {
                for (int sgn : {-1, 1}) {
                    if (i == 0 && sgn == 1) {
                        continue;
                    }
                    const double k = c + sgn * hw * gl7n[i];
                    const double w = gl7w[i] * hw * taper(k) * k;
                    acc += w * (Cplx(std::cos(k * S), -std::sin(k * S)) -
                                Cplx(std::cos(k * dlt), -std::sin(k * dlt)));
                }
            }
        }
        return acc / (2.0 * M_PI);
    };

    // Windowed integrand G = D + M on the separation grid.
    std::vector<Cplx> G(static_cast<size_t>(n) + 1);
    for (long j = 0; j <= n; ++j) {
        const double dlt = h * static_cast<double>(j);
        const double S = (2.0 / a) * std::sinh(0.5 * a * dlt);
        const Eigen::ArrayXd phA = modes.k * S;
        const Eigen::ArrayXd phF = modes.k * dlt;
        const Cplx c_acc((kw * phA.cos()).sum(), -(kw * phA.sin()).sum());
        const Cplx c_free((kw * phF.cos()).sum(), -(kw * phF.sin()).sum());
        Cplx g = c_acc - c_free;
        if (dlt <= spec.match_range / a) {
            g += delta_c_exact(dlt, a) - delta_c_taper_cont(dlt, S);
        }
        G[static_cast<size_t>(j)] = g;
    }

    Eigen::ArrayXd out(static_cast<long>(omega_grid.size()));
    for (size_t q = 0; q < omega_grid.size(); ++q) {
        const double w = omega_grid[q];

        // Window transform 2 Re int_0^T e^{i w dlt} G(dlt) d dlt (Simpson).
        Cplx simpson(0.0, 0.0);
        for (long j = 0; j <= n; ++j) {
            const double dlt = h * static_cast<double>(j);
            const double sw = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            simpson += sw * Cplx(std::cos(w * dlt), std::sin(w * dlt)) * G[static_cast<size_t>(j)];
        }
        simpson *= h / 3.0;

        // Analytic tails of dC beyond the window: the free-field power tail and
        // the thermal image sum (a^2/4)/sinh^2 = a^2 sum m e^{-m a dlt}.
        double tail = cosine_tail_over_sq(w, T) / M_PI;
        for (int m = 1; m <= spec.thermal_terms; ++m) {
            const double ma = m * a;
            if (ma * T > 700.0) {
                break;
            }
            const Cplx num = std::exp(Cplx(-ma * T, w * T));
            tail -= (a * a / M_PI) * m * (num / Cplx(ma, -w)).real();
        }

        const double free_part = w > 0.0 ? taper(w) * w : 0.0;
        out[static_cast<long>(q)] = free_part + 2.0 * simpson.real() + tail;
    }
    return out;
}

} // namespace unruh2d
