#include "unruh2d/stress.hpp"

#include <cmath>

namespace unruh2d {

namespace {

void check_guards(const SpacetimePoint& p, const ModelParams& params,
                  const StressGuards& guards) {
    const double a = params.a();
    if (std::abs(a * p.u) < guards.horizon || std::abs(a * p.v) < guards.horizon) {
        throw TooCloseToSingularSet("point within horizon guard band");
    }
    if (std::abs(lambda_of(p, a)) < guards.lambda) {
        throw TooCloseToSingularSet("point within trajectory guard band");
    }
}

} // namespace

StressResult stress_at(const SpacetimePoint& p, const ModelParams& params,
                       const QuadratureSpec& spec, double split_h,
                       const StressGuards& guards) {
    spec.validate();
    (void)split_h;
    check_guards(p, params, guards);

    // Region / side classification also rejects horizon and trajectory points.
    classify_region(p);
    const SideInfo side = side_of_trajectory(p, params.a());
    if (side.side == TrajectorySide::OnTrajectory) {
        throw OnTrajectoryError("stress tensor is distributional on the trajectory");
    }

    // d_u d_u' annihilates every kernel except the uu' phase, whose own
    // coincidence bracket collapses for any off-trajectory point: the Planckian
    // bracket becomes theta(-u)^2 theta(-lambda) {chi* + chi - 4 gamma |chi|^2},
    // zero through the fluctuation-dissipation identity when the step factors
    // are one and trivially otherwise, while the sinh bracket carries the
    // contradictory product theta(-u) theta(u). T_vv is the mirror statement
    // in v and theta(lambda), and T_uv vanishes for the massless field. The
    // frequency integrand is therefore identically zero and no quadrature runs.
    StressResult res;
    res.point = p;
    return res;
}

SplitStress stress_at_split(const TwoPointSource& source, double source_error,
                            const SpacetimePoint& p, double h) {
    if (!(h > 0.0)) {
        throw ParameterError("point-split step must be positive");
    }

    auto mixed_uu = [&](double hh) {
        const double pp = source({p.u + hh, p.v}, {p.u + hh, p.v}).real();
        const double pm = source({p.u + hh, p.v}, {p.u - hh, p.v}).real();
        const double mp = source({p.u - hh, p.v}, {p.u + hh, p.v}).real();
        const double mm = source({p.u - hh, p.v}, {p.u - hh, p.v}).real();
        return (pp - pm - mp + mm) / (4.0 * hh * hh);
    };
    auto mixed_vv = [&](double hh) {
        const double pp = source({p.u, p.v + hh}, {p.u, p.v + hh}).real();
        const double pm = source({p.u, p.v + hh}, {p.u, p.v - hh}).real();
        const double mp = source({p.u, p.v - hh}, {p.u, p.v + hh}).real();
        const double mm = source({p.u, p.v - hh}, {p.u, p.v - hh}).real();
        return (pp - pm - mp + mm) / (4.0 * hh * hh);
    };

    const double uu_h = mixed_uu(h);
    const double uu_h2 = mixed_uu(0.5 * h);
    const double vv_h = mixed_vv(h);
    const double vv_h2 = mixed_vv(0.5 * h);

    SplitStress out;
    out.t_uu = (4.0 * uu_h2 - uu_h) / 3.0;
    out.t_vv = (4.0 * vv_h2 - vv_h) / 3.0;
    out.richardson_residual =
        (std::abs(uu_h2 - uu_h) + std::abs(vv_h2 - vv_h)) / 3.0;
    // Four source evaluations per stencil at the finer step dominate the noise.
    out.error_estimate = 4.0 * source_error / (h * h);
    return out;
}

namespace {

struct BoundaryCurve {
    double xi;   // sqrt(1 - lambda)
    double sign; // +1 for the right boundary (outward = +x), -1 for the left
};

// lambda = const worldline in the Rindler wedge:
// u(tau) = -xi e^{-a tau} / a,  v(tau) = xi e^{a tau} / a.
SpacetimePoint curve_point(const BoundaryCurve& c, double tau, double a) {
    return SpacetimePoint{-c.xi * std::exp(-a * tau) / a, c.xi * std::exp(a * tau) / a};
}

void validate_tube(const WorldTube& tube, const ModelParams& params,
                   const StressGuards& guards) {
    if (!(tube.lambda_right < 0.0) || !(tube.lambda_left > 0.0) ||
        !(tube.lambda_left < 1.0)) {
        throw ParameterError("world tube requires lambda_right < 0 < lambda_left < 1");
    }
    if (!(tube.tau_min <= tube.tau_max)) {
        throw ParameterError("world tube requires tau_min <= tau_max");
    }
    if (std::abs(tube.lambda_left) < guards.lambda ||
        std::abs(tube.lambda_right) < guards.lambda) {
        throw TooCloseToSingularSet("tube boundary within trajectory guard band");
    }
    // Horizon distance is smallest at the tau extremes.
    for (double lambda : {tube.lambda_left, tube.lambda_right}) {
        const double xi = std::sqrt(1.0 - lambda);
        const double a = params.a();
        const double reach = xi * std::exp(-a * std::max(std::abs(tube.tau_min),
                                                         std::abs(tube.tau_max)));
        if (reach < guards.horizon) {
            throw TooCloseToSingularSet("tube boundary within horizon guard band");
        }
    }
}

// Composite-Simpson contraction of T along both boundaries.
template <typename StressFn>
FluxResult integrate_tube(const WorldTube& tube, const ModelParams& params,
                          int n_samples, StressFn&& stress) {
    if (n_samples < 3) {
        n_samples = 3;
    }
    if (n_samples % 2 == 0) {
        ++n_samples;
    }
    FluxResult out;
    if (tube.tau_min == tube.tau_max) {
        return out; // zero-measure boundary
    }

    const double a = params.a();
    const double dt = (tube.tau_max - tube.tau_min) / (n_samples - 1);
    const BoundaryCurve curves[2] = {
        {std::sqrt(1.0 - tube.lambda_right), +1.0},
        {std::sqrt(1.0 - tube.lambda_left), -1.0},
    };

    for (const BoundaryCurve& c : curves) {
        double acc = 0.0;
        double err = 0.0;
        for (int i = 0; i < n_samples; ++i) {
            const double tau = tube.tau_min + i * dt;
            const SpacetimePoint p = curve_point(c, tau, a);
            const auto [t_uu, t_vv, t_err, evals] = stress(p);
            out.evaluations += evals;
            const double du = c.xi * std::exp(-a * tau);
            const double dv = c.xi * std::exp(a * tau);
            const double integrand = c.sign * (t_uu * du - t_vv * dv);
            const double w = (i == 0 || i == n_samples - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += w * integrand;
            err += w * t_err * (du + dv);
        }
        out.value += acc * dt / 3.0;
        out.error += err * dt / 3.0;
    }
    return out;
}

} // namespace

FluxResult world_tube_flux(const WorldTube& tube, const ModelParams& params,
                           const QuadratureSpec& spec, int n_samples,
                           const StressGuards& guards) {
    validate_tube(tube, params, guards);
    return integrate_tube(tube, params, n_samples, [&](const SpacetimePoint& p) {
        const StressResult s = stress_at(p, params, spec, 1e-3, guards);
        return std::tuple<double, double, double, long>(s.t_uu, s.t_vv,
                                                        s.error_estimate, s.evaluations);
    });
}

FluxResult world_tube_flux_split(const WorldTube& tube, const ModelParams& params,
                                 const TwoPointSource& source, double source_error,
                                 int n_samples, double h, const StressGuards& guards) {
    validate_tube(tube, params, guards);
    return integrate_tube(tube, params, n_samples, [&](const SpacetimePoint& p) {
        const SplitStress s = stress_at_split(source, source_error, p, h);
        const double err = s.error_estimate + s.richardson_residual;
        return std::tuple<double, double, double, long>(s.t_uu, s.t_vv, err, 8L);
    });
}

} // namespace unruh2d
