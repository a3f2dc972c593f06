#pragma once

#include <adwr/cell_values.hpp>
#include <adwr/fe_space.hpp>
#include <adwr/problem.hpp>

#include <functional>
#include <memory>

namespace adwr
{
using LocalMatrix = Eigen::MatrixXd;
using LocalVector = Eigen::VectorXd;

/// Cell matrices of one slab; row = test function, column = trial function.
struct LocalOperators
{
  LocalMatrix M;  // (u, phi)
  LocalMatrix A;  // eps(grad u, grad phi) + (b.grad u, phi) + (alpha u, phi)
  LocalMatrix S;  // delta_K (-eps Lap u + b.grad u + alpha u, b.grad phi)
  LocalMatrix Sb; // delta_K (u, b.grad phi), the SUPG jump coupling
};

/// Element integrals of the stabilized space-time scheme on a given space.
/// The quadrature follows the primal degree in `disc`, so the primal and
/// the 2p adjoint space integrate with the same points.
class LocalForms
{
public:
  LocalForms(const FeSpace &space, const CdrProblem &problem, const Discretization &disc);

  struct Workspace
  {
    CellValues cv;
    int        k = -1; // active index
  };

  Workspace workspace() const;
  void      reinit(Workspace &ws, int k) const;

  double delta(const Workspace &ws) const;

  LocalOperators operators(const Workspace &ws, double t) const;
  /// (f(t), phi) plus Neumann boundary terms.
  LocalVector load(const Workspace &ws, double t) const;
  /// delta_K (f(t), b.grad phi).
  LocalVector supg_load(const Workspace &ws, double t) const;
  /// (u0, phi) and delta_K (u0, b(0).grad phi).
  LocalVector initial(const Workspace &ws) const;
  LocalVector initial_supg(const Workspace &ws) const;

  const FeSpace &
  space() const
  {
    return *space_;
  }

  const CdrProblem &
  problem() const
  {
    return *problem_;
  }

  const Discretization &
  discretization() const
  {
    return disc_;
  }

private:
  const FeSpace                    *space_;
  const CdrProblem                 *problem_;
  Discretization                    disc_;
  std::shared_ptr<const ShapeTable> table_;
  QuadratureRule1D                  face_rule_;
};

/// Sums per-cell matrices selected from the local operators at time t.
SparseMatrix assemble_matrix(const LocalForms &forms,
                             double t,
                             const std::function<LocalMatrix(const LocalOperators &)> &select);

SparseMatrix assemble_mass(const LocalForms &forms);

/// Global vector from a per-cell vector functional.
Vector assemble_vector(const LocalForms &forms,
                       const std::function<LocalVector(const LocalForms &, const LocalForms::Workspace &)> &local);

/// The inner form a(u)(phi) at time t.
SparseMatrix assemble_inner_form(const LocalForms &forms, double t);

/// Time quadrature shared by solver and estimator: 2-point Gauss per interval.
struct TimeRule
{
  std::array<double, 2> points;  // relative positions in (0,1)
  std::array<double, 2> weights; // summing to 1
};

const TimeRule &time_rule();

} // namespace adwr
