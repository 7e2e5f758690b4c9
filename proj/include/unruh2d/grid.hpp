#pragma once

#include <string>
#include <vector>

#include "unruh2d/correlator.hpp"
#include "unruh2d/stress.hpp"

namespace unruh2d {

enum class OutputFormat { Csv, Json };

struct GridSpec {
    double u_min = -3.0, u_max = 3.0;
    double v_min = -3.0, v_max = 3.0;
    int n_u = 10, n_v = 10;
};

// Full run configuration: model parameters, quadrature controls, grid window,
// guard bands, output destination. Loaded from a JSON file, overridable by
// command-line flags.
struct RunConfig {
    double a = 1.0;
    double omega0 = 2.0;
    double coupling = 0.6324555320336759; // gamma = e^2/4 = 0.1
    QuadratureSpec quadrature{};
    GridSpec grid{};
    StressGuards guards{};
    std::string out;
    OutputFormat format = OutputFormat::Csv;

    ModelParams model() const { return ModelParams(a, omega0, coupling); }
    void validate() const;
};

RunConfig load_config(const std::string& path);

enum class CellStatus { Ok, SkippedBoundary, SkippedTrajectory, ConvergenceFailed };
const char* cell_status_name(CellStatus s);

// One grid cell of the stress sweep. Numeric physics fields are meaningful
// only for ok and convergence_failure cells; skipped cells carry geometry and
// status only.
struct GridRecord {
    double u = 0.0, v = 0.0;
    std::string region; // empty on a horizon line
    std::string side;
    double lambda = 0.0;
    CellStatus status = CellStatus::Ok;
    double dphi2 = 0.0, dphi2_err = 0.0;
    double t_uu = 0.0, t_vv = 0.0, t_uv = 0.0, t_err = 0.0;
};

// Evaluates the stress tensor and coincidence correction over the grid.
// Cells are processed by a worker pool; records are returned in row-major
// (u outer, v inner) order regardless of completion order.
std::vector<GridRecord> run_stress_grid(const RunConfig& cfg);

std::string grid_to_csv(const std::vector<GridRecord>& records);
std::string grid_to_json(const std::vector<GridRecord>& records);

struct PolarizationRecord {
    double uv = 0.0; // a^2 u v label of the hyperbola
    double u = 0.0, v = 0.0;
    std::string region;
    std::string side;
    CellStatus status = CellStatus::Ok;
    double dphi2 = 0.0, dphi2_err = 0.0;
    double staticity_dev = 0.0; // relative deviation from the branch reference
};

// Samples the coincidence correction along a^2 u v = const hyperbolae, both
// on the v > 0 branch (the cloud) and the v < 0 branch (confinement zeros).
std::vector<PolarizationRecord> run_polarization(const RunConfig& cfg,
                                                 const std::vector<double>& uv_consts,
                                                 int points_per_branch);

std::string polarization_to_csv(const std::vector<PolarizationRecord>& records);

// Fixed 17-significant-digit decimal formatting used by every writer.
std::string fmt17(double x);

void write_text_file(const std::string& path, const std::string& content);

} // namespace unruh2d
