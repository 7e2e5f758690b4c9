#include "unruh2d/oscillator.hpp"

#include <cmath>

namespace unruh2d {

ModelParams::ModelParams(double a, double omega0, double coupling)
    : a_(a), omega0_(omega0), coupling_(coupling) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ParameterError("acceleration a must be positive and finite");
    }
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw ParameterError("bare frequency omega0 must be positive and finite");
    }
    if (coupling == 0.0 || !std::isfinite(coupling)) {
        throw ParameterError("coupling must be nonzero and finite");
    }
    gamma_ = coupling * coupling / 4.0;
    if (!(gamma_ < omega0)) {
        throw ParameterError("underdamped regime required: gamma = e^2/4 < omega0");
    }
    omega_ = std::sqrt(omega0 * omega0 - gamma_ * gamma_);
}

ModelParams ModelParams::from_gamma(double a, double omega0, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ParameterError("gamma must be positive and finite");
    }
    return ModelParams(a, omega0, 2.0 * std::sqrt(gamma));
}

Complex susceptibility(double omega, const ModelParams& params) {
    const double w0sq = params.omega0() * params.omega0();
    const Complex den(w0sq - omega * omega, 2.0 * omega * params.gamma());
    return Complex(0.0, omega) / den;
}

double fdr_residual(double omega, const ModelParams& params) {
    const Complex chi = susceptibility(omega, params);
    return 2.0 * chi.real() - 4.0 * params.gamma() * std::norm(chi);
}

double response_kernel(double tau, const ModelParams& params) {
    if (tau < 0.0) {
        return 0.0;
    }
    return std::sin(params.omega() * tau) * std::exp(-params.gamma() * tau) / params.omega();
}

} // namespace unruh2d
