#pragma once

#include <adwr/polynomial.hpp>
#include <adwr/types.hpp>

#include <array>
#include <vector>

namespace adwr
{
/// Tensor-product Lagrange element Q_{p1,p2} on [0,1]^2 with Gauss-Lobatto
/// nodes. Local index of node (a,b) is a + (p1+1)*b.
class ReferenceElement
{
public:
  ReferenceElement() = default;
  ReferenceElement(int p1, int p2);
  explicit ReferenceElement(int p)
    : ReferenceElement(p, p)
  {}

  int
  degree(int dir) const
  {
    return deg_[dir];
  }

  int
  n_dofs() const
  {
    return (deg_[0] + 1) * (deg_[1] + 1);
  }

  int
  local_index(int a, int b) const
  {
    return a + (deg_[0] + 1) * b;
  }

  Point node(int i) const;

  const LagrangeBasis1D &
  basis(int dir) const
  {
    return basis_[dir];
  }

  /// Values, reference gradients and (optionally) reference Hessians
  /// (xx, xy, yy) of all shape functions at x.
  void evaluate(const Point &x,
                std::vector<double> &values,
                std::vector<Eigen::Vector2d> *gradients = nullptr,
                std::vector<Eigen::Vector3d> *hessians = nullptr) const;

private:
  std::array<int, 2>             deg_{{1, 1}};
  std::array<LagrangeBasis1D, 2> basis_;
};

} // namespace adwr
