#pragma once

#include <functional>

#include "unruh2d/correlator.hpp"

namespace unruh2d {

// Guard bands around the singular sets: the stress tensor is distributional
// on the horizons and on the trajectory, and the phase cost diverges there.
struct StressGuards {
    double horizon = 0.05; // minimum |a u| and |a v|
    double lambda = 0.05;  // minimum |lambda|
};

struct StressResult {
    double t_uu = 0.0;
    double t_vv = 0.0;
    double t_uv = 0.0; // identically zero for the massless 2D field
    double error_estimate = 0.0;
    SpacetimePoint point{};
    long evaluations = 0;
};

// Renormalized stress tensor at p by analytic differentiation of the active
// correlator kernels under the integral sign. Only same-phase kernels survive
// the mixed derivative, and at coincidence their brackets collapse: either the
// step factors are contradictory or the fluctuation-dissipation identity
// cancels the bracket, so the result is an exact zero detected symbolically.
StressResult stress_at(const SpacetimePoint& p, const ModelParams& params,
                       const QuadratureSpec& spec, double split_h = 1e-3,
                       const StressGuards& guards = {});

// Point-split cross-check: mixed second differences of a two-point source with
// one Richardson halving. The source is any correlator implementation
// (delta_two_point or the mode-sum oracle).
using TwoPointSource =
    std::function<std::complex<double>(const SpacetimePoint&, const SpacetimePoint&)>;

struct SplitStress {
    double t_uu = 0.0;
    double t_vv = 0.0;
    double richardson_residual = 0.0; // |D(h/2) - D(h)| / 3, both components
    double error_estimate = 0.0;      // propagated source errors / (2h)^2 scale
};

SplitStress stress_at_split(const TwoPointSource& source, double source_error,
                            const SpacetimePoint& p, double h);

// Two accelerated worldlines lambda = const enclosing the trajectory.
struct WorldTube {
    double lambda_left;  // 0 < lambda_left < 1
    double lambda_right; // lambda_right < 0
    double tau_min;
    double tau_max;
};

struct FluxResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

// Net outward energy flux through the tube boundary over [tau_min, tau_max].
// Outward positive; the boundary element contracts the null components as
// dPhi = T_uu du - T_vv dv on the right boundary and its negative on the left.
FluxResult world_tube_flux(const WorldTube& tube, const ModelParams& params,
                           const QuadratureSpec& spec, int n_samples,
                           const StressGuards& guards = {});

// Same contraction with point-split finite-difference stress from an arbitrary
// two-point source; used to cross-check the analytic zeros.
FluxResult world_tube_flux_split(const WorldTube& tube, const ModelParams& params,
                                 const TwoPointSource& source, double source_error,
                                 int n_samples, double h,
                                 const StressGuards& guards = {});

} // namespace unruh2d
