#pragma once

#include <adwr/mesh.hpp>
#include <adwr/quadrature.hpp>
#include <adwr/reference_element.hpp>

#include <memory>
#include <vector>

namespace adwr
{
/// Shape data of an element tabulated at the points of a reference rule.
struct ShapeTable
{
  ShapeTable(const ReferenceElement &e, const QuadratureRule2D &rule);

  const ReferenceElement                    *element;
  QuadratureRule2D                           rule;
  std::vector<std::vector<double>>           values;
  std::vector<std::vector<Eigen::Vector2d>>  gradients;
  std::vector<std::vector<Eigen::Vector3d>>  hessians;
};

/// Mapped shape values, gradients and Laplacians on one cell.
class CellValues
{
public:
  explicit CellValues(std::shared_ptr<const ShapeTable> table)
    : table_(std::move(table))
  {}

  void reinit(const AnisoQuadMesh &mesh, int cell, bool need_laplacian);

  int
  n_points() const
  {
    return static_cast<int>(table_->rule.size());
  }

  int
  n_dofs() const
  {
    return table_->element->n_dofs();
  }

  double
  JxW(int q) const
  {
    return jxw_[q];
  }

  const Point &
  point(int q) const
  {
    return x_[q];
  }

  double
  value(int q, int i) const
  {
    return table_->values[q][i];
  }

  const Eigen::Vector2d &
  grad(int q, int i) const
  {
    return grad_[q * n_dofs() + i];
  }

  double
  laplacian(int q, int i) const
  {
    return lap_[q * n_dofs() + i];
  }

  double
  measure() const
  {
    return measure_;
  }

private:
  std::shared_ptr<const ShapeTable> table_;
  std::vector<double>               jxw_;
  std::vector<Point>                x_;
  std::vector<Eigen::Vector2d>      grad_;
  std::vector<double>               lap_;
  double                            measure_ = 0;
};

} // namespace adwr
