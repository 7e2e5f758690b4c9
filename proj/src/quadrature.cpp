#include "unruh2d/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace unruh2d {

void QuadratureSpec::validate() const {
    if (!(omega_max > 0.0) || !(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw ParameterError("quadrature spec: omega_max and tolerances must be positive");
    }
    if (max_subdivisions < 1) {
        throw ParameterError("quadrature spec: max_subdivisions must be >= 1");
    }
    if (!(zero_window > 0.0) || !(zero_window < 0.1 * omega_max)) {
        throw ParameterError("quadrature spec: zero_window must satisfy 0 < zero_window << omega_max");
    }
}

double thermal_weight(ThermalWeight kind, double omega, double a) {
    const double x = 2.0 * M_PI * omega / a;
    switch (kind) {
        case ThermalWeight::Planckian: {
            // (1 - e^{-x})^-1, rewritten for x < 0 to avoid overflow.
            if (omega > 0.0) {
                return 1.0 / (1.0 - std::exp(-x));
            }
            const double e = std::exp(x); // x < 0, e < 1
            return -e / (1.0 - e);
        }
        case ThermalWeight::CoshSinh: {
            // 1 / sinh(pi omega / a), via e^{-|y|} to stay finite at large |y|.
            const double y = 0.5 * x;
            const double e = std::exp(-std::abs(y));
            const double s = (1.0 - e * e) / (2.0 * e); // sinh(|y|)
            return (y >= 0.0 ? 1.0 : -1.0) / s;
        }
    }
    return 0.0;
}

FoldedChannels fold_integrand(const std::function<std::complex<double>(double)>& f,
                              double a, ThermalWeight kind) {
    // Contract: f(-w) must equal a real multiple of conj(f(w)).
    const double probes[] = {0.37 * a, 1.7 * a, 9.3 * a};
    for (double w : probes) {
        const auto fp = f(w);
        const auto fm = f(-w);
        const double scale = std::abs(fp) + std::abs(fm);
        if (scale == 0.0) {
            continue;
        }
        const auto ratio = fm * fp; // fm / conj(fp) up to |fp|^2 > 0
        if (std::abs(ratio.imag()) > 1e-8 * std::abs(ratio) + 1e-300) {
            throw ContractError("fold_integrand: integrand violates conjugate symmetry");
        }
    }

    auto g = [f](double w) { return f(w) + f(-w); };
    FoldedChannels out;
    out.re = [g](double w) { return g(w).real(); };
    if (kind == ThermalWeight::CoshSinh) {
        // Odd weight: the fold is exactly real.
        out.im = [](double) { return 0.0; };
        out.im_is_zero = true;
    } else {
        out.im = [g](double w) { return g(w).imag(); };
    }
    return out;
}

namespace {

// 7-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; symmetric).
constexpr double kGL7Node[4] = {0.0, 0.4058451513773972, 0.7415311855993944,
                                0.9491079123427585};
constexpr double kGL7Weight[4] = {0.4179591836734694, 0.3818300505051189,
                                  0.2797053914892767, 0.1294849661688697};

// Gauss7 / Kronrod15 nodes and weights on [-1, 1] (standard QUADPACK values).
constexpr double kK15Node[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kK15Weight[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786, 0.0229353220105292,
};
constexpr double kG7Weight[4] = {0.4179591836734694, 0.3818300505051189,
                                 0.2797053914892767, 0.1294849661688697};

struct Panel {
    double lo, hi;
    double value;
    double error;
};

// One G7/K15 evaluation on [lo, hi]; returns Kronrod value, |K15 - G7| error.
Panel gauss_kronrod(const std::function<double(double)>& g, double lo, double hi,
                    long& evaluations) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double f0 = g(c);
    double k15 = kK15Weight[0] * f0;
    double g7 = kG7Weight[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kK15Node[i];
        const double fi = g(c + dx) + g(c - dx);
        k15 += kK15Weight[i] * fi;
        if (i % 2 == 0) {
            g7 += kG7Weight[i / 2] * fi;
        }
    }
    evaluations += 15;
    k15 *= h;
    g7 *= h;
    return Panel{lo, hi, k15, std::abs(k15 - g7)};
}

// Fixed Gauss rule on [0, w]: open nodes, so the removable singularity at 0 is
// never touched. Error is estimated by comparison with the two-half version.
void zero_window_integral(const std::function<double(double)>& g, double w,
                          double& value, double& error, long& evaluations) {
    auto gl7 = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        double s = kGL7Weight[0] * g(c);
        for (int i = 1; i < 4; ++i) {
            const double dx = h * kGL7Node[i];
            s += kGL7Weight[i] * (g(c + dx) + g(c - dx));
        }
        evaluations += 7;
        return s * h;
    };
    const double whole = gl7(0.0, w);
    const double halves = gl7(0.0, 0.5 * w) + gl7(0.5 * w, w);
    value = halves;
    error = std::abs(whole - halves);
}

} // namespace

IntegralResult integrate_omega(const std::function<double(double)>& g,
                               const QuadratureSpec& spec, double a,
                               double phase_rate, double tail_bound) {
    spec.validate();
    if (!(a > 0.0)) {
        throw ParameterError("integrate_omega: a must be positive");
    }

    const double window = spec.zero_window * a;
    const double upper = spec.omega_max * a;

    IntegralResult res;
    double window_value = 0.0;
    double window_error = 0.0;
    zero_window_integral(g, window, window_value, window_error, res.evaluations);

    // Initial panels: a few per oscillation period, capped by the budget.
    const double span = upper - window;
    int n0 = 8;
    if (phase_rate > 0.0) {
        n0 = std::max(n0, static_cast<int>(std::ceil(span * phase_rate / 4.0)));
    }
    n0 = std::min(n0, spec.max_subdivisions);

    std::vector<Panel> panels;
    panels.reserve(static_cast<size_t>(n0) + 64);
    for (int i = 0; i < n0; ++i) {
        const double lo = window + span * i / n0;
        const double hi = window + span * (i + 1) / n0;
        panels.push_back(gauss_kronrod(g, lo, hi, res.evaluations));
    }

    auto totals = [&panels]() {
        double v = 0.0, e = 0.0;
        for (const Panel& p : panels) {
            v += p.value;
            e += p.error;
        }
        return std::pair<double, double>(v, e);
    };

    auto [value, error] = totals();
    while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
        if (static_cast<int>(panels.size()) >= spec.max_subdivisions) {
            // Deterministic ordered sum for the partial result.
            std::sort(panels.begin(), panels.end(),
                      [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
            auto [v, e] = totals();
            throw ConvergenceFailure("integrate_omega: subdivision budget exhausted",
                                     v + window_value, e + window_error + tail_bound);
        }
        // Split the worst panel (ties broken by position for determinism).
        size_t worst = 0;
        for (size_t i = 1; i < panels.size(); ++i) {
            if (panels[i].error > panels[worst].error ||
                (panels[i].error == panels[worst].error && panels[i].lo < panels[worst].lo)) {
                worst = i;
            }
        }
        const Panel split = panels[worst];
        const double mid = 0.5 * (split.lo + split.hi);
        panels[worst] = gauss_kronrod(g, split.lo, mid, res.evaluations);
        panels.push_back(gauss_kronrod(g, mid, split.hi, res.evaluations));
        std::tie(value, error) = totals();
    }

    // Sum in interval order so the result does not depend on refinement history.
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    double ordered = window_value;
    for (const Panel& p : panels) {
        ordered += p.value;
    }

    res.value = ordered;
    res.error = error + window_error + tail_bound;
    res.panels = static_cast<int>(panels.size());
    return res;
}

} // namespace unruh2d
