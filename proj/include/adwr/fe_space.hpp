#pragma once

#include <adwr/mesh.hpp>
#include <adwr/reference_element.hpp>
#include <adwr/types.hpp>

#include <map>
#include <memory>
#include <set>
#include <vector>

namespace adwr
{
/// U = C * U_free + G * g_D, where g_D holds nodal Dirichlet values.
/// Hanging DoFs are resolved transitively onto free and Dirichlet DoFs.
class AffineConstraints
{
public:
  int
  n_dofs() const
  {
    return static_cast<int>(free_index_.size());
  }

  int
  n_free() const
  {
    return n_free_;
  }

  int
  n_dirichlet() const
  {
    return static_cast<int>(dirichlet_dofs_.size());
  }

  bool
  is_free(int dof) const
  {
    return free_index_[dof] >= 0;
  }

  bool
  is_dirichlet(int dof) const
  {
    return dirichlet_index_[dof] >= 0;
  }

  bool
  is_hanging(int dof) const
  {
    return !is_free(dof) && !is_dirichlet(dof);
  }

  int
  free_index(int dof) const
  {
    return free_index_[dof];
  }

  const std::vector<int> &
  free_dofs() const
  {
    return free_dofs_;
  }

  const std::vector<int> &
  dirichlet_dofs() const
  {
    return dirichlet_dofs_;
  }

  /// Boundary id each Dirichlet DoF takes its data from.
  const std::vector<int> &
  dirichlet_ids() const
  {
    return dirichlet_bids_;
  }

  /// Direct (unresolved) interpolation relation of a hanging DoF.
  const std::vector<std::pair<int, double>> &
  hanging_line(int dof) const
  {
    return lines_.at(dof);
  }

  const SparseMatrix &
  expansion() const
  {
    return C_;
  }

  const SparseMatrix &
  dirichlet_lift() const
  {
    return G_;
  }

  Vector expand(const Vector &free, const Vector &g_dirichlet) const;
  Vector restrict_to_free(const Vector &full) const;
  /// Overwrites hanging entries from their masters.
  void distribute(Vector &u) const;

private:
  friend class FeSpace;
  std::vector<int> free_index_, dirichlet_index_, free_dofs_, dirichlet_dofs_, dirichlet_bids_;
  int              n_free_ = 0;
  std::map<int, std::vector<std::pair<int, double>>> lines_;
  SparseMatrix C_, G_;
};

/// Continuous Q_p space on the active cells of a mesh.
class FeSpace
{
public:
  FeSpace(const AnisoQuadMesh &mesh, int degree, std::set<int> dirichlet_ids = {});

  const AnisoQuadMesh &
  mesh() const
  {
    return *mesh_;
  }

  int
  degree() const
  {
    return degree_;
  }

  const ReferenceElement &
  element() const
  {
    return element_;
  }

  int
  n_dofs() const
  {
    return n_dofs_;
  }

  int
  n_cells() const
  {
    return static_cast<int>(cell_dofs_.size());
  }

  /// Global DoFs of the k-th active cell, local lexicographic order.
  const std::vector<int> &
  cell_dofs(int k) const
  {
    return cell_dofs_[k];
  }

  /// Cell id of the k-th active cell.
  int
  cell_id(int k) const
  {
    return mesh_->active_cells()[k];
  }

  /// Position of an active cell id in active_cells(), -1 if inactive.
  int
  active_index(int cell) const
  {
    return active_index_[cell];
  }

  const Point &
  support_point(int dof) const
  {
    return support_[dof];
  }

  const AffineConstraints &
  constraints() const
  {
    return constraints_;
  }

  const std::set<int> &
  dirichlet_ids() const
  {
    return dirichlet_ids_;
  }

  /// Nodal interpolant; hanging DoFs are made conforming.
  Vector interpolate(const ScalarFunction &f, double t = 0.0) const;

  /// Nodal Dirichlet values for the constraint lift.
  Vector dirichlet_values(const std::map<int, ScalarFunction> &data, double t) const;

  double evaluate(const Vector &u, const Point &x, int cell_hint = -1) const;
  /// Value on a known active cell at reference coordinates.
  double evaluate_reference(const Vector &u, int cell, const Point &xi) const;

  const PointLocator &
  locator() const
  {
    return *locator_;
  }

private:
  const AnisoQuadMesh             *mesh_;
  int                              degree_;
  ReferenceElement                 element_;
  std::set<int>                    dirichlet_ids_;
  int                              n_dofs_ = 0;
  std::vector<std::vector<int>>    cell_dofs_;
  std::vector<int>                 active_index_;
  std::vector<Point>               support_;
  AffineConstraints                constraints_;
  std::shared_ptr<PointLocator>    locator_;
};

} // namespace adwr
