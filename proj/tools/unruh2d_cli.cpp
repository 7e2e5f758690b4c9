// Command-line front end: configuration, grid sweeps, verification commands,
// CSV/JSON emission. Exit codes: 0 ok, 1 check failed, 2 invalid input,
// 3 I/O error, 4 convergence failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "unruh2d/grid.hpp"
#include "unruh2d/oracle.hpp"

using namespace unruh2d;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitIoError = 3;
constexpr int kExitConvergence = 4;

struct CommonFlags {
    std::string config;
    double a = -1.0, omega0 = -1.0, coupling = 0.0;
    std::string grid_spec;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON configuration file");
    cmd->add_option("--a", f.a, "acceleration a");
    cmd->add_option("--omega0", f.omega0, "bare oscillator frequency");
    cmd->add_option("--coupling", f.coupling, "field coupling e (gamma = e^2/4)");
    cmd->add_option("--grid", f.grid_spec, "grid as umin:umax:nu,vmin:vmax:nv");
    cmd->add_option("--out", f.out, "output file path (default stdout)");
    cmd->add_option("--format", f.format, "output format: csv | json");
}

// Flags win over the config file.
RunConfig resolve_config(const CommonFlags& f) {
    RunConfig cfg;
    if (!f.config.empty()) {
        cfg = load_config(f.config);
    }
    if (f.a > 0.0) {
        cfg.a = f.a;
    }
    if (f.omega0 > 0.0) {
        cfg.omega0 = f.omega0;
    }
    if (f.coupling != 0.0) {
        cfg.coupling = f.coupling;
    }
    if (!f.grid_spec.empty()) {
        double umin, umax, vmin, vmax;
        int nu, nv;
        if (std::sscanf(f.grid_spec.c_str(), "%lf:%lf:%d,%lf:%lf:%d", &umin, &umax, &nu,
                        &vmin, &vmax, &nv) != 6) {
            throw ParameterError("bad --grid spec, expected umin:umax:nu,vmin:vmax:nv");
        }
        cfg.grid = GridSpec{umin, umax, vmin, vmax, nu, nv};
    }
    if (!f.out.empty()) {
        cfg.out = f.out;
    }
    if (!f.format.empty()) {
        if (f.format == "csv") {
            cfg.format = OutputFormat::Csv;
        } else if (f.format == "json") {
            cfg.format = OutputFormat::Json;
        } else {
            throw ParameterError("format must be csv or json");
        }
    }
    cfg.validate();
    return cfg;
}

void emit(const RunConfig& cfg, const std::string& content) {
    if (cfg.out.empty()) {
        std::cout << content;
    } else {
        write_text_file(cfg.out, content);
    }
}

SpacetimePoint parse_point(const std::string& s) {
    double u, v;
    if (std::sscanf(s.c_str(), "%lf,%lf", &u, &v) != 2) {
        throw ParameterError("bad point spec, expected u,v");
    }
    return SpacetimePoint{u, v};
}

int cmd_fdr_check(const RunConfig& cfg, int n_points) {
    const ModelParams params = cfg.model();
    double worst = 0.0;
    double worst_omega = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double t = n_points == 1 ? 0.0 : static_cast<double>(i) / (n_points - 1);
        const double w = params.omega0() * std::pow(10.0, -6.0 + 12.0 * t);
        const double scale = std::max(1.0, std::abs(susceptibility(w, params)));
        const double r = std::abs(fdr_residual(w, params)) / scale;
        if (r > worst) {
            worst = r;
            worst_omega = w;
        }
    }
    std::cout << "fdr-check: max |(chi+chi*) - 4 gamma |chi|^2| / max(1,|chi|) = "
              << fmt17(worst) << " at omega = " << fmt17(worst_omega) << "\n";
    return worst < 1e-12 ? kExitOk : kExitCheckFailed;
}

int cmd_correlator(const RunConfig& cfg, const SpacetimePoint& p, const SpacetimePoint& q) {
    const CorrelatorResult r = delta_two_point(p, q, cfg.model(), cfg.quadrature);
    std::ostringstream os;
    os << "{\"p\":[" << fmt17(p.u) << ',' << fmt17(p.v) << "],\"pp\":[" << fmt17(q.u) << ','
       << fmt17(q.v) << "],\"re\":" << fmt17(r.value.real()) << ",\"im\":"
       << fmt17(r.value.imag()) << ",\"error\":" << fmt17(r.error_estimate)
       << ",\"evaluations\":" << r.evaluations << ",\"terms\":[";
    for (size_t i = 0; i < r.terms_active.size(); ++i) {
        const CorrelatorTerm& t = r.terms_active[i];
        os << (i ? "," : "") << "{\"phase\":\"" << phase_kind_name(t.phase)
           << "\",\"chi\":\"" << chi_factor_name(t.chi) << "\",\"weight\":\""
           << (t.weight == ThermalWeight::Planckian ? "planck" : "sinh")
           << "\",\"log_phase\":" << fmt17(t.log_phase) << "}";
    }
    os << "]}\n";
    emit(cfg, os.str());
    return kExitOk;
}

int cmd_stress_grid(const RunConfig& cfg) {
    const std::vector<GridRecord> records = run_stress_grid(cfg);
    emit(cfg, cfg.format == OutputFormat::Csv ? grid_to_csv(records)
                                              : grid_to_json(records));
    return kExitOk;
}

int cmd_polarization(const RunConfig& cfg, const std::string& uv_list, int points) {
    std::vector<double> consts;
    std::stringstream ss(uv_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        consts.push_back(std::stod(tok));
    }
    if (consts.empty()) {
        throw ParameterError("no hyperbolae given");
    }
    const auto records = run_polarization(cfg, consts, points);
    emit(cfg, polarization_to_csv(records));
    return kExitOk;
}

int cmd_flux(const RunConfig& cfg, const WorldTube& tube, int samples) {
    const ModelParams params = cfg.model();
    const FluxResult r = world_tube_flux(tube, params, cfg.quadrature, samples, cfg.guards);
    const double bound = r.error + 1e-6 * params.a() * params.a();
    std::cout << "flux: net outward energy flux = " << fmt17(r.value) << " +- "
              << fmt17(r.error) << " (pass bound " << fmt17(bound) << ")\n";
    return std::abs(r.value) <= bound ? kExitOk : kExitCheckFailed;
}

std::vector<std::pair<SpacetimePoint, SpacetimePoint>> default_pairs() {
    return {
        {{-2.0, 2.0}, {-3.0, 3.0}},   // both right of the trajectory, R
        {{-1.5, 1.2}, {-2.5, 0.8}},   // both right, R
        {{-2.0, 0.7}, {-1.8, 0.9}},   // both right, R
        {{-0.4, 2.0}, {-0.3, 1.5}},   // both left, R
        {{1.0, 2.0}, {0.5, 1.5}},     // both left, F
        {{1.0, 2.0}, {-0.4, 2.0}},    // both left, F x R
        {{-2.0, 2.0}, {-0.4, 2.0}},   // straddling, right x left in R
        {{1.0, 2.0}, {-2.0, 2.0}},    // straddling, F-left x R-right
        {{2.0, -0.2}, {-2.0, 2.0}},   // straddling, L x R-right
        {{-2.0, 2.0}, {-2.0, 2.0}},   // coincident pair
    };
}

int cmd_oracle_compare(const RunConfig& cfg, const std::string& pairs_file, int n_modes,
                       double box, double dtau, double tolerance) {
    std::vector<std::pair<SpacetimePoint, SpacetimePoint>> pairs;
    if (pairs_file.empty()) {
        pairs = default_pairs();
    } else {
        std::ifstream in(pairs_file);
        if (!in) {
            throw ParameterError("cannot open pairs file: " + pairs_file);
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') {
                continue;
            }
            double u, v, u2, v2;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &u, &v, &u2, &v2) != 4) {
                throw ParameterError("bad pair line: " + line);
            }
            pairs.push_back({{u, v}, {u2, v2}});
        }
    }
    if (pairs.empty()) {
        throw ParameterError("no point pairs to compare");
    }

    const ModelParams params = cfg.model();
    const ModeSet modes = ModeSet::make_refined(box / params.a(), n_modes, params);
    std::vector<SpacetimePoint> points;
    for (const auto& [p, q] : pairs) {
        points.push_back(p);
        points.push_back(q);
    }
    OracleEvaluator eval(params, modes, points, dtau);

    double worst = 0.0;
    for (const auto& [p, q] : pairs) {
        const CorrelatorResult r = delta_two_point(p, q, params, cfg.quadrature);
        const std::complex<double> o = eval.two_point(p, q);
        const double scale = std::max(std::abs(o), 1e-12);
        const double dev = std::abs(r.value - o) / scale;
        worst = std::max(worst, dev);
        std::cout << "pair (" << fmt17(p.u) << ',' << fmt17(p.v) << ")x(" << fmt17(q.u)
                  << ',' << fmt17(q.v) << "): quadrature = " << fmt17(r.value.real())
                  << (r.value.imag() < 0 ? "-" : "+") << fmt17(std::abs(r.value.imag()))
                  << "i, oracle = " << fmt17(o.real()) << (o.imag() < 0 ? "-" : "+")
                  << fmt17(std::abs(o.imag())) << "i, rel dev = " << fmt17(dev) << "\n";
    }
    std::cout << "oracle-compare: max relative deviation = " << fmt17(worst) << "\n";
    return worst <= tolerance ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniformly accelerated oscillator in 1+1D: correlators, stress tensor, oracle"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* fdr = app.add_subcommand("fdr-check", "verify the fluctuation-dissipation identity");
    int fdr_points = 100000;
    add_common(fdr, flags);
    fdr->add_option("--omega-points", fdr_points, "number of log-spaced frequencies");

    auto* corr = app.add_subcommand("correlator", "evaluate G - G_f for one point pair");
    std::string p_spec, q_spec;
    add_common(corr, flags);
    corr->add_option("--point", p_spec, "first point as u,v")->required();
    corr->add_option("--point2", q_spec, "second point as u,v")->required();

    auto* grid = app.add_subcommand("stress-grid", "stress tensor and cloud over a grid");
    add_common(grid, flags);

    auto* pol = app.add_subcommand("polarization", "cloud profile along a^2 uv = const");
    std::string uv_list = "-2.0,-0.5,1.0";
    int pol_points = 24;
    add_common(pol, flags);
    pol->add_option("--uv", uv_list, "comma-separated hyperbola constants");
    pol->add_option("--points", pol_points, "samples per branch");

    auto* flux = app.add_subcommand("flux", "net energy flux through a world tube");
    WorldTube tube{0.5, -0.5, -1.0, 1.0};
    int flux_samples = 33;
    add_common(flux, flags);
    flux->add_option("--lambda-left", tube.lambda_left, "left boundary lambda (0, 1)");
    flux->add_option("--lambda-right", tube.lambda_right, "right boundary lambda < 0");
    flux->add_option("--tau-min", tube.tau_min, "proper-time window start");
    flux->add_option("--tau-max", tube.tau_max, "proper-time window end");
    flux->add_option("--samples", flux_samples, "boundary samples");

    auto* cmp = app.add_subcommand("oracle-compare", "quadrature vs mode-sum oracle");
    std::string pairs_file;
    int cmp_modes = 2048;
    double cmp_box = 200.0, cmp_dtau = 1e-3, cmp_tol = 0.05;
    add_common(cmp, flags);
    cmp->add_option("--pairs", pairs_file, "CSV of u,v,u2,v2 pairs (default: built-in set)");
    cmp->add_option("--modes", cmp_modes, "modes per sign of k");
    cmp->add_option("--box", cmp_box, "box size in units 1/a");
    cmp->add_option("--dtau", cmp_dtau, "proper-time step");
    cmp->add_option("--tolerance", cmp_tol, "maximum relative deviation");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = resolve_config(flags);
        if (*fdr) {
            return cmd_fdr_check(cfg, fdr_points);
        }
        if (*corr) {
            return cmd_correlator(cfg, parse_point(p_spec), parse_point(q_spec));
        }
        if (*grid) {
            return cmd_stress_grid(cfg);
        }
        if (*pol) {
            return cmd_polarization(cfg, uv_list, pol_points);
        }
        if (*flux) {
            return cmd_flux(cfg, tube, flux_samples);
        }
        if (*cmp) {
            return cmd_oracle_compare(cfg, pairs_file, cmp_modes, cmp_box, cmp_dtau, cmp_tol);
        }
    } catch (const ConvergenceFailure& e) {
        std::cerr << "convergence failure: " << e.what()
                  << " (best estimate " << fmt17(e.best_estimate()) << ", error "
                  << fmt17(e.achieved_error()) << ")\n";
        return kExitConvergence;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}
