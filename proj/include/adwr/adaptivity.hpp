#pragma once

#include <adwr/estimator.hpp>

#include <functional>
#include <optional>

namespace adwr
{
enum class WeightMode
{
  fixed,     // the weights given with the goals
  sign_rule  // w_i = sign(J_i(u2) - J_i(u_h)) with the patchwise 2p interpolant u2
};

struct AdaptConfig
{
  double theta_h   = 1.0 / 3;
  double theta_tau = 1.0 / 3;
  int    max_loops = 10;
  long   max_total_dofs = 0;   // 0: unlimited
  double stop_tolerance = 0.0; // on |eta_tau_h|
  // intervals are marked only while |eta_tau| > tau_floor * |eta_h|
  double tau_floor = 0.01;
  // cells and intervals at or below this fraction of the largest |indicator|
  // (over both directions for cells) are never marked
  double eligibility = 1e-8;
  bool       patch_smoothing = false;
  WeightMode weight_mode     = WeightMode::fixed;
  SolverKind solver          = SolverKind::direct;
};

struct LoopRecord
{
  int                 loop    = 0;
  long                n_space = 0;
  int                 n_t     = 0;
  long                n_tot   = 0;
  std::vector<double> goal_values;
  double              goal_value  = 0;
  double              error       = std::numeric_limits<double>::quiet_NaN();
  double              eta_h_x     = 0;
  double              eta_h_y     = 0;
  double              eta_h       = 0;
  double              eta_tau     = 0;
  double              eta_tau_h   = 0;
  double              i_eff       = std::numeric_limits<double>::quiet_NaN();
  double              ar_max      = 0;
  double              wall_time   = 0;
  RefineStats         refinement; // what the marks of this loop produced
  int                 n_time_marks = 0;
};

struct Aggregates
{
  std::array<std::vector<double>, 2> cell_h; // by active index
  std::vector<double>                interval_tau;
};

Aggregates aggregate(const ErrorIndicators &eta);

struct Marks
{
  std::vector<RefinementMark> spatial; // cell ids
  std::vector<int>            temporal;
};

/// Top fraction by |indicator| per direction and for the intervals; ties go
/// to the lower index. `active_cells` maps active index to cell id.
Marks mark(const Aggregates &agg,
           const std::vector<int> &active_cells,
           const AdaptConfig &config,
           double eta_h,
           double eta_tau);

/// Indices of the ceil(theta*n) largest |v|, ascending; entries with
/// |v| <= floor_abs are never taken.
std::vector<int> top_fraction(const std::vector<double> &v, double theta, double floor_abs = 0.0);

/// Everything a loop produced, for output hooks.
struct LoopState
{
  const AnisoQuadMesh   &mesh;
  const FeSpace         &primal_space;
  const SlabSolution    &primal;
  const SlabSolution    &adjoint;
  const ErrorIndicators &eta;
  const LoopRecord      &record;
};

struct DwrSetup
{
  CdrProblem     problem;
  Discretization disc;
  AnisoQuadMesh  mesh;
  TimePartition  partition;
  CombinedGoal   goal;
  std::optional<ScalarFunction> exact; // analytic solution, if known
};

/// Algorithm: solve primal, solve adjoint, estimate, record, mark, refine.
/// SolverError is rethrown with the loop number in the message.
std::vector<LoopRecord> run_dwr_loop(DwrSetup setup,
                                     const AdaptConfig &config,
                                     const std::function<void(const LoopState &)> &on_loop = {});

} // namespace adwr
