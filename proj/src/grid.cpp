#include "unruh2d/grid.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace unruh2d {

void RunConfig::validate() const {
    model(); // parameter checks
    quadrature.validate();
    if (!std::isfinite(grid.u_min) || !std::isfinite(grid.u_max) ||
        !std::isfinite(grid.v_min) || !std::isfinite(grid.v_max)) {
        throw ParameterError("grid bounds must be finite");
    }
    if (grid.n_u < 1 || grid.n_v < 1) {
        throw ParameterError("grid must have n_u, n_v >= 1");
    }
    if (!(guards.horizon > 0.0) || !(guards.lambda > 0.0)) {
        throw ParameterError("guard bands must be positive");
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot open config file: " + path);
    }
    nlohmann::json j;
    in >> j;

    RunConfig cfg;
    cfg.a = j.value("a", cfg.a);
    cfg.omega0 = j.value("omega0", cfg.omega0);
    cfg.coupling = j.value("coupling", cfg.coupling);
    if (j.contains("quadrature")) {
        const auto& q = j["quadrature"];
        cfg.quadrature.omega_max = q.value("omega_max", cfg.quadrature.omega_max);
        cfg.quadrature.rel_tol = q.value("rel_tol", cfg.quadrature.rel_tol);
        cfg.quadrature.abs_tol = q.value("abs_tol", cfg.quadrature.abs_tol);
        cfg.quadrature.max_subdivisions =
            q.value("max_subdivisions", cfg.quadrature.max_subdivisions);
        cfg.quadrature.zero_window = q.value("zero_window", cfg.quadrature.zero_window);
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        cfg.grid.u_min = g.value("u_min", cfg.grid.u_min);
        cfg.grid.u_max = g.value("u_max", cfg.grid.u_max);
        cfg.grid.v_min = g.value("v_min", cfg.grid.v_min);
        cfg.grid.v_max = g.value("v_max", cfg.grid.v_max);
        cfg.grid.n_u = g.value("n_u", cfg.grid.n_u);
        cfg.grid.n_v = g.value("n_v", cfg.grid.n_v);
    }
    if (j.contains("guards")) {
        const auto& g = j["guards"];
        cfg.guards.horizon = g.value("horizon", cfg.guards.horizon);
        cfg.guards.lambda = g.value("lambda", cfg.guards.lambda);
    }
    cfg.out = j.value("out", cfg.out);
    const std::string fmt = j.value("format", std::string("csv"));
    if (fmt == "csv") {
        cfg.format = OutputFormat::Csv;
    } else if (fmt == "json") {
        cfg.format = OutputFormat::Json;
    } else {
        throw ParameterError("format must be csv or json");
    }
    return cfg;
}

const char* cell_status_name(CellStatus s) {
    switch (s) {
        case CellStatus::Ok: return "ok";
        case CellStatus::SkippedBoundary: return "skipped_boundary";
        case CellStatus::SkippedTrajectory: return "skipped_trajectory";
        case CellStatus::ConvergenceFailed: return "convergence_failure";
    }
    return "?";
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::ios_base::failure("cannot open output path: " + path);
    }
    out << content;
    if (!out) {
        throw std::ios_base::failure("write failed: " + path);
    }
}

namespace {

GridRecord evaluate_cell(double u, double v, const RunConfig& cfg,
                         const ModelParams& params) {
    GridRecord rec;
    rec.u = u;
    rec.v = v;
    const SpacetimePoint p{u, v};

    rec.lambda = lambda_of(p, params.a());
    if (u != 0.0 && v != 0.0) {
        rec.region = region_name(classify_region(p));
        rec.side = side_name(side_of_trajectory(p, params.a()).side);
    }

    const double au = std::abs(params.a() * u);
    const double av = std::abs(params.a() * v);
    if (au < cfg.guards.horizon || av < cfg.guards.horizon) {
        rec.status = CellStatus::SkippedBoundary;
        return rec;
    }
    if (std::abs(rec.lambda) < cfg.guards.lambda) {
        rec.status = CellStatus::SkippedTrajectory;
        return rec;
    }

    try {
        const StressResult s = stress_at(p, params, cfg.quadrature, 1e-3, cfg.guards);
        rec.t_uu = s.t_uu;
        rec.t_vv = s.t_vv;
        rec.t_uv = s.t_uv;
        rec.t_err = s.error_estimate;
        const CoincidenceResult c =
            coincidence_delta_phi_sq_detail(p, params, cfg.quadrature);
        rec.dphi2 = c.value;
        rec.dphi2_err = c.error_estimate;
        rec.status = CellStatus::Ok;
    } catch (const ConvergenceFailure& e) {
        rec.status = CellStatus::ConvergenceFailed;
        rec.dphi2 = e.best_estimate();
        rec.dphi2_err = e.achieved_error();
    }
    return rec;
}

} // namespace

std::vector<GridRecord> run_stress_grid(const RunConfig& cfg) {
    cfg.validate();
    const ModelParams params = cfg.model();

    const int nu = cfg.grid.n_u;
    const int nv = cfg.grid.n_v;
    auto coord = [](double lo, double hi, int n, int i) {
        return n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    };

    std::vector<GridRecord> records(static_cast<size_t>(nu) * nv);
    const long total = static_cast<long>(records.size());

    // Cells are independent; assemble by index so the output order is fixed.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_workers = static_cast<unsigned>(
        std::min<long>(total, static_cast<long>(std::min(hw, 8u))));
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        workers.emplace_back([&, w]() {
            for (long idx = w; idx < total; idx += n_workers) {
                const int i = static_cast<int>(idx) / nv;
                const int j = static_cast<int>(idx) % nv;
                const double u = coord(cfg.grid.u_min, cfg.grid.u_max, nu, i);
                const double v = coord(cfg.grid.v_min, cfg.grid.v_max, nv, j);
                records[static_cast<size_t>(idx)] = evaluate_cell(u, v, cfg, params);
            }
        });
    }
    for (auto& t : workers) {
        t.join();
    }
    return records;
}

namespace {

void append_numeric_fields_csv(std::ostringstream& os, const GridRecord& r) {
    if (r.status == CellStatus::Ok || r.status == CellStatus::ConvergenceFailed) {
        os << fmt17(r.dphi2) << ',' << fmt17(r.dphi2_err) << ',' << fmt17(r.t_uu) << ','
           << fmt17(r.t_vv) << ',' << fmt17(r.t_uv) << ',' << fmt17(r.t_err);
    } else {
        os << ",,,,,";
    }
}

} // namespace

std::string grid_to_csv(const std::vector<GridRecord>& records) {
    std::ostringstream os;
    os << "# unruh2d stress-grid schema v1\n";
    os << "u,v,region,side,lambda,dphi2,dphi2_err,t_uu,t_vv,t_uv,t_err,status\n";
    for (const GridRecord& r : records) {
        os << fmt17(r.u) << ',' << fmt17(r.v) << ',' << r.region << ',' << r.side << ','
           << fmt17(r.lambda) << ',';
        append_numeric_fields_csv(os, r);
        os << ',' << cell_status_name(r.status) << '\n';
    }
    return os.str();
}

std::string grid_to_json(const std::vector<GridRecord>& records) {
    std::ostringstream os;
    for (const GridRecord& r : records) {
        os << "{\"u\":" << fmt17(r.u) << ",\"v\":" << fmt17(r.v) << ",\"region\":\""
           << r.region << "\",\"side\":\"" << r.side << "\",\"lambda\":" << fmt17(r.lambda);
        if (r.status == CellStatus::Ok || r.status == CellStatus::ConvergenceFailed) {
            os << ",\"dphi2\":" << fmt17(r.dphi2) << ",\"dphi2_err\":" << fmt17(r.dphi2_err)
               << ",\"t_uu\":" << fmt17(r.t_uu) << ",\"t_vv\":" << fmt17(r.t_vv)
               << ",\"t_uv\":" << fmt17(r.t_uv) << ",\"t_err\":" << fmt17(r.t_err);
        }
        os << ",\"status\":\"" << cell_status_name(r.status) << "\"}\n";
    }
    return os.str();
}

std::vector<PolarizationRecord> run_polarization(const RunConfig& cfg,
                                                 const std::vector<double>& uv_consts,
                                                 int points_per_branch) {
    cfg.validate();
    if (points_per_branch < 1) {
        throw ParameterError("polarization needs at least one point per branch");
    }
    const ModelParams params = cfg.model();
    const double a = params.a();

    std::vector<PolarizationRecord> records;
    for (double c : uv_consts) {
        if (c == 0.0 || std::abs(1.0 + c) < kLambdaTol) {
            throw ParameterError("hyperbola a^2 u v = c must avoid c = 0 and c = -1");
        }
        for (int branch = 0; branch < 2; ++branch) {
            // branch 0: v > 0 (cloud region); branch 1: v < 0 (confinement zeros).
            double reference = 0.0;
            bool have_reference = false;
            for (int i = 0; i < points_per_branch; ++i) {
                // Log-spaced |v| in [0.3, 3]/a.
                const double t = points_per_branch == 1
                                     ? 0.0
                                     : static_cast<double>(i) / (points_per_branch - 1);
                const double av = 0.3 * std::pow(10.0, t);
                const double v = (branch == 0 ? av : -av) / a;
                const double u = c / (a * a * v);

                PolarizationRecord rec;
                rec.uv = c;
                rec.u = u;
                rec.v = v;
                const SpacetimePoint p{u, v};
                rec.region = region_name(classify_region(p));
                rec.side = side_name(side_of_trajectory(p, a).side);
                try {
                    const CoincidenceResult r =
                        coincidence_delta_phi_sq_detail(p, params, cfg.quadrature);
                    rec.dphi2 = r.value;
                    rec.dphi2_err = r.error_estimate;
                    rec.status = CellStatus::Ok;
                    if (!have_reference) {
                        reference = r.value;
                        have_reference = true;
                    }
                    const double scale = std::max(std::abs(reference), 1e-300);
                    rec.staticity_dev = std::abs(r.value - reference) / scale;
                } catch (const ConvergenceFailure& e) {
                    rec.status = CellStatus::ConvergenceFailed;
                    rec.dphi2 = e.best_estimate();
                    rec.dphi2_err = e.achieved_error();
                }
                records.push_back(rec);
            }
        }
    }
    return records;
}

std::string polarization_to_csv(const std::vector<PolarizationRecord>& records) {
    std::ostringstream os;
    os << "# unruh2d polarization schema v1\n";
    os << "uv,u,v,region,side,dphi2,dphi2_err,staticity_dev,status\n";
    for (const PolarizationRecord& r : records) {
        os << fmt17(r.uv) << ',' << fmt17(r.u) << ',' << fmt17(r.v) << ',' << r.region << ','
           << r.side << ',' << fmt17(r.dphi2) << ',' << fmt17(r.dphi2_err) << ','
           << fmt17(r.staticity_dev) << ',' << cell_status_name(r.status) << '\n';
    }
    return os.str();
}

} // namespace unruh2d
