#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "unruh2d/kinematics.hpp"
#include "unruh2d/oscillator.hpp"

namespace unruh2d {

// Discretized field modes in a periodic box of length L: k_n = 2 pi n / L,
// n = 1..N, with the mirror block at -k_n implied. The k = 0 mode is excluded:
// it drives no oscillator response (chi_0 = 0) and cancels in G - G_f.
//
// make_refined additionally resolves the infrared end: each mode's ringdown
// carries a factor (k/Omega)^{gamma/a} whose k-integral converges only
// logarithmically, so the lowest box cells are replaced by log-spaced
// wavenumbers with trapezoidal weights in ln k, continued deep enough that
// the remaining band is negligible. Weights always reproduce the continuum
// measure dk / (4 pi omega) per sign of k.
struct ModeSet {
    double box_length = 0.0;
    int n_modes = 0;            // entries per sign of k
    Eigen::ArrayXd k;           // positive wavenumbers, ascending
    Eigen::ArrayXd omega;       // |k|
    Eigen::ArrayXd weight;      // discrete measure per sign

    static ModeSet make(double box_length, int n_modes);
    static ModeSet make_refined(double box_length, int n_modes, const ModelParams& params);
};

struct TauGrid {
    double tau_min = 0.0;
    double dtau = 1e-3;
    long n = 0;

    double at(long i) const { return tau_min + static_cast<double>(i) * dtau; }
    double tau_max() const { return at(n - 1); }
};

// Steady-state solution of q'' + 2 gamma q' + Omega0^2 q = -e dphi/dtau for a
// field value phi(tau) sampled on the grid. The convolution is evaluated in
// the integrated-by-parts form q = (e/Omega) int (dK/ds) phi, which needs no
// derivative of phi and responds exactly zero to a constant field.
Eigen::ArrayXcd response_to_field(const std::function<std::complex<double>(double)>& phi,
                                  const ModelParams& params, const TauGrid& grid);

// Proper-time window in which mode k is integrated by time stepping. Outside
// it the response is carried by closed-form asymptotics: the fast-phase
// particular solution far from resonance and adiabatic quiescence at
// negligible phase rates.
struct DriveWindow {
    double from;
    double until;
};
DriveWindow mode_drive_window(double k, const ModelParams& params);

// Per-mode detector response q_k on the grid: the retarded convolution of the
// response kernel with the mode derivative along the trajectory. The grid must
// provide at least 10/gamma of burn-in before tau_eval_min.
Eigen::ArrayXcd mode_q_response(double k, const ModelParams& params, const TauGrid& grid,
                                double tau_eval_min);

// Interaction part of mode k at point p, assembled from sampled q_k:
// (e/2) [theta(-u) theta(-lambda) q(tau_u) + theta(v) theta(lambda) q(tau_v)].
std::complex<double> mode_phi_int(double k, const SpacetimePoint& p,
                                  const ModelParams& params, const TauGrid& grid,
                                  const Eigen::ArrayXcd& q_samples);

// Batch evaluator: integrates all modes once, storing snapshots of q_k at the
// retarded times needed by a fixed set of evaluation points.
class OracleEvaluator {
  public:
    OracleEvaluator(const ModelParams& params, const ModeSet& modes,
                    const std::vector<SpacetimePoint>& points, double dtau = 1e-3);

    // G(p,p') - G_f(p,p') by the discrete mode sum. Both points must have been
    // registered at construction.
    std::complex<double> two_point(const SpacetimePoint& p, const SpacetimePoint& q) const;

    const ModelParams& params() const { return params_; }

  private:
    struct PointData {
        bool right_active;
        bool left_active;
        int snap_u = -1; // snapshot index for tau_u
        int snap_v = -1; // snapshot index for tau_v
    };

    void run(const std::vector<double>& times);
    Eigen::ArrayXcd phi_int_modes(const PointData& d) const;
    Eigen::ArrayXcd free_modes(const SpacetimePoint& p) const;
    const PointData& lookup(const SpacetimePoint& p) const;

    ModelParams params_;
    ModeSet modes_;
    double dtau_;
    std::vector<std::pair<SpacetimePoint, PointData>> points_;
    std::vector<Eigen::ArrayXcd> qpos_, qneg_; // snapshots, one pair per time
};

// Convenience wrapper for a single pair.
std::complex<double> oracle_two_point(const SpacetimePoint& p, const SpacetimePoint& q,
                                      const ModelParams& params, const ModeSet& modes,
                                      double dtau = 1e-3);

// Estimator controls for the trajectory noise spectrum. window/dstep/
// match_range are in units of 1/a; the taper is a smooth high-power rolloff
// of the mode weights that removes the sharp-cutoff ringing of the sum.
struct SpectrumSpec {
    double window = 9.0;
    double dstep = 2.5e-3;
    double taper_fraction = 0.7;
    int taper_power = 8;
    double match_range = 2.0;
    int thermal_terms = 48;
};

// Power spectrum S(omega) of d phi_0 / d tau along the trajectory from the
// mode sum: the correlator C(dtau) is accumulated mode by mode against the
// matched free-field sum, transformed over a finite window, and completed by
// the analytic free-field part and closed-form window/cutoff tails. Detailed
// balance S(-omega)/S(omega) = e^{-2 pi omega / a} is the target observable.
Eigen::ArrayXd oracle_noise_spectrum(const ModelParams& params, const ModeSet& modes,
                                     const std::vector<double>& omega_grid,
                                     const SpectrumSpec& spec = {});

} // namespace unruh2d
