#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <functional>

namespace adwr
{
using Point   = Eigen::Vector2d;
using Tensor2 = Eigen::Matrix2d;
using Vector  = Eigen::VectorXd;

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet      = Eigen::Triplet<double>;

/// f(x, t)
using ScalarFunction = std::function<double(const Point &, double)>;
/// b(x, t)
using VectorFunction = std::function<Point(const Point &, double)>;

/// Coordinate direction of the reference cell.
enum class Axis : int
{
  x = 0,
  y = 1
};

inline constexpr int
index(Axis a)
{
  return static_cast<int>(a);
}

inline constexpr Axis
other(Axis a)
{
  return a == Axis::x ? Axis::y : Axis::x;
}

} // namespace adwr
