#pragma once

#include <string>

#include "unruh2d/errors.hpp"

namespace unruh2d {

// Minkowski event in null coordinates u = t - x, v = t + x.
struct SpacetimePoint {
    double u{0.0};
    double v{0.0};
};

// Quadrants of 1+1 Minkowski space cut by the horizons u = 0 and v = 0.
// R is the Rindler wedge containing the accelerated trajectory.
enum class Region { F, P, R, L };

enum class TrajectorySide { RightOfTrajectory, LeftOfTrajectory, OnTrajectory };

// Side classification together with lambda = 1 + a^2 u v.
struct SideInfo {
    TrajectorySide side;
    double lambda;
};

// |lambda| below this counts as "on the trajectory".
inline constexpr double kLambdaTol = 1e-9;

SpacetimePoint to_null(double t, double x);
double time_of(const SpacetimePoint& p);
double space_of(const SpacetimePoint& p);

// Uniformly accelerated worldline x = a^-1 cosh(a tau), t = a^-1 sinh(a tau),
// i.e. u = -a^-1 e^{-a tau}, v = a^-1 e^{a tau}.
SpacetimePoint trajectory(double tau, double a);

double lambda_of(const SpacetimePoint& p, double a);

Region classify_region(const SpacetimePoint& p);
const char* region_name(Region r);

SideInfo side_of_trajectory(const SpacetimePoint& p, double a);
const char* side_name(TrajectorySide s);

// Proper time at which the right-moving null ray through u left the
// trajectory: -a^-1 ln|a u|, defined for u < 0.
double retarded_time_right(double u, double a);

// Left-moving counterpart: a^-1 ln|a v|, defined for v > 0.
double retarded_time_left(double v, double a);

} // namespace unruh2d
