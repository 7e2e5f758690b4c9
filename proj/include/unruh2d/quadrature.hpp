#pragma once

#include <complex>
#include <functional>

#include "unruh2d/errors.hpp"

namespace unruh2d {

// Controls the frequency integration of the correlator integrals.
// omega_max and zero_window are expressed in units of the acceleration a.
struct QuadratureSpec {
    double omega_max = 40.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
    double zero_window = 1e-3;

    void validate() const;
};

// Thermal weights of the two integral blocks. Both have a simple pole at
// omega = 0 which cancels against the conjugate partner term under folding.
enum class ThermalWeight { Planckian, CoshSinh };

// Stable evaluation for either sign of omega (no overflow for large |omega|).
double thermal_weight(ThermalWeight kind, double omega, double a);

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;     // quadrature error + caller-supplied tail bound
    long evaluations = 0;   // integrand evaluations performed
    int panels = 0;
};

// Real-channel / imaginary-channel integrands of the folded function
// g(w) = f(w) + f(-w) on (0, inf). For a CoshSinh-weighted f the imaginary
// channel vanishes identically and im_is_zero is set.
struct FoldedChannels {
    std::function<double(double)> re;
    std::function<double(double)> im;
    bool im_is_zero = false;
};

// Symmetric fold w -> -w of a full-line complex integrand. The input must
// satisfy f(-w) = A(w) conj(f(w)) with a real asymmetry factor A (the thermal
// weights have exactly this property); violation raises ContractError.
FoldedChannels fold_integrand(const std::function<std::complex<double>(double)>& f,
                              double a, ThermalWeight kind);

// Adaptive Gauss-Kronrod integration of g over (0, spec.omega_max * a].
// The interval (0, zero_window * a] is handled by a fixed Gauss rule acting on
// the smooth continuation of g (open nodes, never evaluates at 0); the rest is
// globally adaptive G7/K15 with initial panels sized to the oscillation rate
// phase_rate (radians per unit omega). tail_bound is an externally computed
// bound on the |omega| > omega_max truncation, added to the error estimate.
IntegralResult integrate_omega(const std::function<double(double)>& g,
                               const QuadratureSpec& spec, double a,
                               double phase_rate = 0.0, double tail_bound = 0.0);

} // namespace unruh2d
