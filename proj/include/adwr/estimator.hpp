#pragma once

#include <adwr/fe_space.hpp>
#include <adwr/forms.hpp>
#include <adwr/goals.hpp>
#include <adwr/mesh.hpp>
#include <adwr/time_slab_solver.hpp>

#include <optional>
#include <vector>

namespace adwr
{
/// Element-local interpolation operators between Q_p and Q_2p on the
/// Gauss-Lobatto nodes, all acting on lexicographic local coefficient vectors.
class LocalInterpolation
{
public:
  explicit LocalInterpolation(int p);

  int
  p() const
  {
    return p_;
  }

  int
  q() const
  {
    return 2 * p_;
  }

  /// Q_p -> Q_2p embedding.
  const LocalMatrix &
  embed() const
  {
    return embed_;
  }

  /// Q_2p -> Q_p nodal interpolation (R_h^p).
  const LocalMatrix &
  restrict_p() const
  {
    return restrict_;
  }

  /// R_h^p expressed in the Q_2p basis (embed * restrict).
  const LocalMatrix &
  restrict_h() const
  {
    return rh_;
  }

  /// R_i^p: degree p in direction i, unchanged in the other, Q_2p basis.
  const LocalMatrix &
  restrict_dir(Axis i) const
  {
    return rdir_[index(i)];
  }

  /// Patch interpolation onto the Q_2p basis of one child.
  /// `values` holds patch node values (see gather_patch), `shape` the patch
  /// shape, `pos` the child position; `lift` tells per direction whether the
  /// degree is raised to 2p across the patch.
  LocalVector patch_to_child(const std::vector<double> &values,
                             const std::array<int, 2> &shape,
                             const std::array<int, 2> &pos,
                             const std::array<bool, 2> &lift) const;

private:
  LocalMatrix one_d(int shape, int pos, bool lift) const;

  int                        p_;
  LocalMatrix                embed_, restrict_, rh_;
  std::array<LocalMatrix, 2> rdir_;
  LocalMatrix                embed1_, restr1_;
  LocalMatrix                patch1_[2]; // degree-2p patch basis at child q-nodes, per child position
};

/// Position of child `cell` within its patch.
std::array<int, 2> child_position(const AnisoQuadMesh &mesh, const Patch &patch, int cell);

/// Patch node values of a p-space vector, x index fastest.
std::vector<double> gather_patch(const FeSpace &pspace, const Patch &patch, const Vector &u);

/// I_2h^(2p) u (dir absent) or the directional I_2h,i^(2p) u, as broken
/// Q_2p coefficients per active cell. Exception patches give the plain embedding.
std::vector<LocalVector> interpolate_patch(const FeSpace &pspace,
                                           const PatchSet &patches,
                                           const Vector &u,
                                           std::optional<Axis> dir = std::nullopt);

/// Global R_h^p: adjoint-space vector to primal-space vector.
Vector restrict_degree(const FeSpace &qspace, const FeSpace &pspace, const Vector &z);

/// Global R_i^p, staying in the adjoint space.
Vector restrict_directional(const FeSpace &qspace, int p, const Vector &z, Axis dir);

/// Linear-in-time reconstruction through interval midpoint values; on
/// interval i the line through midpoints i and i+1 (i-1 and i on the last).
struct TemporalReconstruction
{
  explicit TemporalReconstruction(const TimePartition &partition);

  /// E u(t) on interval i is a*u[ia] + b*u[ib].
  struct Line
  {
    int    ia = 0, ib = 0;
    double left_a = 1, left_b = 0;   // coefficients at the left end t_i
    double right_a = 1, right_b = 0; // at the right end t_{i+1}
  };

  std::vector<Line> lines;
  bool              identity = false; // single interval: no reconstruction possible

  Vector evaluate(const SlabSolution &u, int interval, double t) const;
};

struct ErrorIndicators
{
  int n_cells     = 0;
  int n_intervals = 0;
  // local contributions, index k * n_intervals + n
  std::vector<double>                eta_tau_local;
  std::array<std::vector<double>, 2> eta_h_local;

  double eta_h_dir[2] = {0, 0};
  double eta_tau      = 0;

  double
  eta_h() const
  {
    return eta_h_dir[0] + eta_h_dir[1];
  }

  double
  eta_tau_h() const
  {
    return eta_tau + eta_h();
  }

  /// Per-cell sums over intervals (signed).
  std::vector<double> cell_eta_h(Axis dir) const;
  /// Per-interval sums over cells (signed).
  std::vector<double> interval_eta_tau() const;
};

/// Computes eta_tau and eta_h,i with cell/interval localization.
ErrorIndicators estimate(const SlabSolution &primal,
                         const SlabSolution &adjoint,
                         const CdrProblem &problem,
                         const Discretization &disc,
                         const CombinedGoal &goal,
                         const PatchSet &patches);

/// |eta_tau_h / (J(u) - J(u_h))|; NaN for a zero exact error.
double effectivity_index(const ErrorIndicators &eta, double exact_goal_error);

/// J_i(I_2h^(2p) u_h) for each goal, the higher-order goal values behind the
/// weight sign rule.
std::vector<double> higher_order_goal_values(const SlabSolution &primal,
                                             const FeSpace &qspace,
                                             const PatchSet &patches,
                                             const CombinedGoal &goal);

} // namespace adwr
