#pragma once

#include <complex>

#include "unruh2d/errors.hpp"

namespace unruh2d {

using Complex = std::complex<double>;

// Physical parameters of the accelerated internal oscillator.
// Derived quantities: gamma = e^2/4 (dissipation), Omega = sqrt(Omega0^2 - gamma^2).
// Only the underdamped regime gamma < Omega0 is supported.
class ModelParams {
  public:
    ModelParams(double a, double omega0, double coupling);

    // Convenience for tests/benchmarks quoted in terms of gamma: e = 2 sqrt(gamma).
    static ModelParams from_gamma(double a, double omega0, double gamma);

    double a() const noexcept { return a_; }
    double omega0() const noexcept { return omega0_; }
    double coupling() const noexcept { return coupling_; }
    double gamma() const noexcept { return gamma_; }
    double omega() const noexcept { return omega_; }

  private:
    double a_;
    double omega0_;
    double coupling_;
    double gamma_;
    double omega_;
};

// Oscillator impedance chi_w = i w (-w^2 + Omega0^2 + 2 i w gamma)^-1.
Complex susceptibility(double omega, const ModelParams& params);

// (chi + chi*) - 4 gamma |chi|^2; identically zero for the exact impedance.
double fdr_residual(double omega, const ModelParams& params);

// Retarded response kernel Omega^-1 sin(Omega tau) e^{-gamma tau}, zero for tau < 0.
double response_kernel(double tau, const ModelParams& params);

} // namespace unruh2d
