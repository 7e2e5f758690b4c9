#pragma once

#include <stdexcept>
#include <string>

namespace unruh2d {

// A point on the null horizon u=0 or v=0: regions and retarded-time logic are
// undefined there and the stress tensor is distributional.
struct BoundaryPointError : std::domain_error {
    using std::domain_error::domain_error;
};

// A point within lambda_tol of the accelerated trajectory lambda = 0.
struct OnTrajectoryError : std::domain_error {
    using std::domain_error::domain_error;
};

// Invalid model or run parameters (a <= 0, overdamped oscillator, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A caller violated an interface contract (symmetry of a folded integrand,
// burn-in span, retarded time outside the sampled grid, ...).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// Point so far from the trajectory that the integrand phase |ln|x|| exceeds
// the supported oscillation budget.
struct RangeLimitError : std::domain_error {
    using std::domain_error::domain_error;
};

// Point inside the guard band around the horizon or the trajectory.
struct TooCloseToSingularSet : std::domain_error {
    using std::domain_error::domain_error;
};

// Adaptive quadrature ran out of subdivisions; carries the best estimate.
class ConvergenceFailure : public std::runtime_error {
  public:
    ConvergenceFailure(const std::string& what, double best_estimate, double achieved_error)
        : std::runtime_error(what), best_(best_estimate), err_(achieved_error) {}

    double best_estimate() const noexcept { return best_; }
    double achieved_error() const noexcept { return err_; }

  private:
    double best_;
    double err_;
};

} // namespace unruh2d
