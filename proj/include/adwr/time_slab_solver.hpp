#pragma once

#include <adwr/fe_space.hpp>
#include <adwr/forms.hpp>
#include <adwr/linear_solver.hpp>
#include <adwr/problem.hpp>

#include <vector>

namespace adwr
{
/// 0 = t_0 < ... < t_N = T; interval i is (t_i, t_{i+1}].
class TimePartition
{
public:
  TimePartition() = default;
  explicit TimePartition(std::vector<double> points);
  static TimePartition uniform(double T, int n);

  int
  n_intervals() const
  {
    return static_cast<int>(t_.size()) - 1;
  }

  double
  start(int i) const
  {
    return t_[i];
  }

  double
  end(int i) const
  {
    return t_[i + 1];
  }

  double
  tau(int i) const
  {
    return t_[i + 1] - t_[i];
  }

  double
  midpoint(int i) const
  {
    return 0.5 * (t_[i] + t_[i + 1]);
  }

  double
  final_time() const
  {
    return t_.back();
  }

  const std::vector<double> &
  points() const
  {
    return t_;
  }

  /// Splits each listed interval in half.
  void bisect(const std::vector<int> &intervals);

private:
  std::vector<double> t_{0.0, 1.0};
};

/// One coefficient vector per interval (dG(0)).
struct SlabSolution
{
  const FeSpace      *space = nullptr;
  TimePartition       partition;
  std::vector<Vector> values;

  const Vector &
  final_value() const
  {
    return values.back();
  }
};

struct SolverOptions
{
  SolverKind kind = SolverKind::direct;
};

/// Forward sweep of the stabilized dG(0) scheme.
SlabSolution solve_primal(const FeSpace &space,
                          const CdrProblem &problem,
                          const Discretization &disc,
                          const TimePartition &partition,
                          const SolverOptions &opts = {});

/// Backward sweep of the transposed stabilized scheme on `space` (degree 2p
/// in practice) with homogeneous Dirichlet constraints. goal_loads[i] is the
/// goal derivative tested on interval i.
SlabSolution solve_adjoint(const FeSpace &space,
                           const CdrProblem &problem,
                           const Discretization &disc,
                           const TimePartition &partition,
                           const std::vector<Vector> &goal_loads,
                           const SolverOptions &opts = {});

} // namespace adwr
