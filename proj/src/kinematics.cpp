#include "unruh2d/kinematics.hpp"

#include <cmath>

namespace unruh2d {

namespace {
void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string("non-finite ") + what);
    }
}

void require_positive_accel(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ParameterError("acceleration must be positive and finite");
    }
}
} // namespace

SpacetimePoint to_null(double t, double x) {
    require_finite(t, "time");
    require_finite(x, "position");
    return SpacetimePoint{t - x, t + x};
}

double time_of(const SpacetimePoint& p) { return 0.5 * (p.u + p.v); }
double space_of(const SpacetimePoint& p) { return 0.5 * (p.v - p.u); }

SpacetimePoint trajectory(double tau, double a) {
    require_positive_accel(a);
    require_finite(tau, "proper time");
    return SpacetimePoint{-std::exp(-a * tau) / a, std::exp(a * tau) / a};
}

double lambda_of(const SpacetimePoint& p, double a) {
    require_positive_accel(a);
    return 1.0 + a * a * p.u * p.v;
}

Region classify_region(const SpacetimePoint& p) {
    if (p.u == 0.0 || p.v == 0.0) {
        throw BoundaryPointError("point lies on a null horizon (u = 0 or v = 0)");
    }
    if (p.u > 0.0) {
        return p.v > 0.0 ? Region::F : Region::L;
    }
    return p.v > 0.0 ? Region::R : Region::P;
}

const char* region_name(Region r) {
    switch (r) {
        case Region::F: return "F";
        case Region::P: return "P";
        case Region::R: return "R";
        case Region::L: return "L";
    }
    return "?";
}

SideInfo side_of_trajectory(const SpacetimePoint& p, double a) {
    const double lambda = lambda_of(p, a);
    if (std::abs(lambda) < kLambdaTol) {
        return SideInfo{TrajectorySide::OnTrajectory, lambda};
    }
    return SideInfo{lambda < 0.0 ? TrajectorySide::RightOfTrajectory
                                 : TrajectorySide::LeftOfTrajectory,
                    lambda};
}

const char* side_name(TrajectorySide s) {
    switch (s) {
        case TrajectorySide::RightOfTrajectory: return "right";
        case TrajectorySide::LeftOfTrajectory: return "left";
        case TrajectorySide::OnTrajectory: return "on";
    }
    return "?";
}

double retarded_time_right(double u, double a) {
    require_positive_accel(a);
    if (!(u < 0.0)) {
        throw std::domain_error("right retarded time requires u < 0");
    }
    return -std::log(std::abs(a * u)) / a;
}

double retarded_time_left(double v, double a) {
    require_positive_accel(a);
    if (!(v > 0.0)) {
        throw std::domain_error("left retarded time requires v > 0");
    }
    return std::log(std::abs(a * v)) / a;
}

} // namespace unruh2d
