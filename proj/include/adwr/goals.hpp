#pragma once

#include <adwr/fe_space.hpp>
#include <adwr/forms.hpp>
#include <adwr/time_slab_solver.hpp>

#include <limits>
#include <string>
#include <vector>

namespace adwr
{
/// alpha * exp(1 - 1/(1 - r^2/s^2)) for r < s, 0 outside; integrates to 1.
class MollifiedDelta
{
public:
  MollifiedDelta(const Point &center, double cutoff);

  double operator()(const Point &x) const;

  double
  alpha() const
  {
    return alpha_;
  }

  const Point &
  center() const
  {
    return c_;
  }

  double
  cutoff() const
  {
    return s_;
  }

  /// int_0^1 exp(1 - 1/(1 - rho^2)) rho d rho, by composite Gauss quadrature.
  static double profile_moment();

  /// int delta(x) g(x) dx over the support disk (polar product rule).
  double integrate(const std::function<double(const Point &)> &g, int radial_panels = 128, int angles = 2048) const;

private:
  Point  c_;
  double s_;
  double alpha_;
};

enum class GoalKind
{
  terminal_point,        // u(c, T), mollified
  time_integrated_point, // int_W u(c, t) dt, mollified
  volume_integral        // int_W int_Omega w(x) u dx dt
};

GoalKind    parse_goal_kind(const std::string &s);
std::string to_string(GoalKind k);

/// Sparse list of (active cell index, local load vector).
using CellLoads = std::vector<std::pair<int, LocalVector>>;

struct GoalFunctional
{
  GoalKind kind   = GoalKind::terminal_point;
  Point    center = Point::Zero();
  double   cutoff = 0.05;
  double   t_begin = 0.0;
  double   t_end   = std::numeric_limits<double>::infinity();
  ScalarFunction weight; // volume goals; empty means 1

  bool
  terminal() const
  {
    return kind == GoalKind::terminal_point;
  }

  /// Length of [a,b] inside the time window.
  double window_overlap(double a, double b) const;

  /// Spatial part tested with the basis of `space`, per cell.
  CellLoads cell_loads(const FeSpace &space) const;
  Vector    load(const FeSpace &space) const;

  /// Value on a discrete solution; time integrals use the dG(0) values.
  double evaluate(const SlabSolution &u) const;
  /// Value of a given space-time function. Volume goals integrate over `mesh`.
  double evaluate_exact(const ScalarFunction &u, double T, const AnisoQuadMesh *mesh = nullptr) const;
};

struct CombinedGoal
{
  std::vector<GoalFunctional> goals;
  std::vector<double>         weights;

  double evaluate(const SlabSolution &u) const;
  double evaluate_exact(const ScalarFunction &u, double T, const AnisoQuadMesh *mesh = nullptr) const;

  /// Right-hand sides of the adjoint sweep on `space`, one per interval.
  std::vector<Vector> adjoint_loads(const FeSpace &space, const TimePartition &partition) const;
};

/// Validates and packs goals; throws PreconditionError on an empty list.
CombinedGoal combine(std::vector<GoalFunctional> goals, std::vector<double> weights);

} // namespace adwr
