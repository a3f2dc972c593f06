#pragma once

#include <adwr/types.hpp>

#include <map>
#include <set>

namespace adwr
{
/// du/dt - eps*Lap(u) + b.grad(u) + alpha*u = f on Omega x (0,T].
struct CdrProblem
{
  double         epsilon = 1.0;
  VectorFunction b       = [](const Point &, double) { return Point(0, 0); };
  ScalarFunction alpha   = [](const Point &, double) { return 0.0; };
  ScalarFunction f       = [](const Point &, double) { return 0.0; };
  ScalarFunction u0      = [](const Point &, double) { return 0.0; };
  std::map<int, ScalarFunction> dirichlet; // boundary id -> g_D
  std::map<int, ScalarFunction> neumann;   // boundary id -> eps * du/dn
  double T = 1.0;

  /// b and alpha do not depend on t; lets the solver reuse matrices.
  bool steady_coefficients = true;

  std::set<int>
  dirichlet_ids() const
  {
    std::set<int> ids;
    for (const auto &[id, g] : dirichlet)
      ids.insert(id);
    return ids;
  }
};

/// Parameters of the discrete scheme shared by solver and estimator.
struct Discretization
{
  int    degree = 1;   // primal cG(p); the adjoint uses 2p
  double delta0 = 0.0; // SUPG: delta_K = delta0 * |K|^(1/2)

  /// Gauss points per direction for volume terms.
  int
  volume_points() const
  {
    return 2 * degree + 1;
  }

  int
  face_points() const
  {
    return degree + 1;
  }
};

} // namespace adwr
