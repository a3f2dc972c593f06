#pragma once

#include <adwr/fe_space.hpp>
#include <adwr/goals.hpp>
#include <adwr/problem.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace adwr
{
/// Moving hump on (0,1)^2 x (0,0.5]: b = (2,3), alpha = 1, homogeneous
/// Dirichlet data, f derived in closed form from the exact solution.
namespace moving_hump
{
inline constexpr double r0 = 0.25;

ScalarFunction exact(double epsilon);
CdrProblem     problem(double epsilon);
/// Terminal mollified point values at (1/2 -+ r0/sqrt2, 1/2 -+ r0/sqrt2).
std::vector<GoalFunctional> goals(double cutoff = 0.05);
} // namespace moving_hump

/// Hemker obstacle: eps = 1e-6, b = (1,0), alpha = 0, f = 0, u0 = 0, T = 9;
/// u = 0 at the inflow, u = 1 on the circle, natural conditions elsewhere.
namespace hemker
{
CdrProblem problem(double epsilon = 1e-6);
/// Time-integrated point values at (4,1) and just off the circle.
std::vector<GoalFunctional> goals(double cutoff_1 = 0.1, double cutoff_2 = 5e-7);

Point wall_point();  // (-2^-1/2, 2^-1/2) on the circle
Point wall_normal(); // outward from the obstacle there
} // namespace hemker

/// Smooth steady solution on (0,1)^2 with a volume goal. The extruded variant
/// depends on x only (b = (1,0), natural conditions at y = 0 and y = 1).
namespace manufactured
{
ScalarFunction              exact(bool extruded);
CdrProblem                  problem(double epsilon, bool extruded, double T = 1.0);
std::vector<GoalFunctional> goals(bool extruded);
} // namespace manufactured

/// Distance between the outermost crossings of u = 0.9 and u = 0.1 along
/// lambda in (0, lambda_max], located on a geometric grid and bisected.
/// Throws NotFoundError if a level is not bracketed.
double boundary_layer_width(const std::function<double(double)> &u_of_lambda,
                            double lambda_min = 1e-10,
                            double lambda_max = 1.0,
                            int    samples    = 2000);

/// The same along the wall normal of the Hemker obstacle.
double boundary_layer_width(const FeSpace &space, const Vector &u);

struct CutPoint
{
  std::string line;
  double      s; // arc parameter along the line
  Point       x;
  double      u;
};

/// Vertical line x = 4 through the interior layers, and the wall normal at
/// the second control point (geometric spacing, starting on the wall).
std::vector<CutPoint> hemker_cut_lines(const FeSpace &space, const Vector &u, int points = 2000);

} // namespace adwr
