#pragma once

#include <adwr/types.hpp>

#include <vector>

namespace adwr
{
/// Rule on the unit interval [0,1].
struct QuadratureRule1D
{
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t
  size() const
  {
    return points.size();
  }
};

/// Tensor-product rule on the unit square, x index running fastest.
struct QuadratureRule2D
{
  std::vector<Point>  points;
  std::vector<double> weights;

  std::size_t
  size() const
  {
    return points.size();
  }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
QuadratureRule1D
gauss_legendre(int n);

/// The degree+1 Gauss-Lobatto points on [0,1] in increasing order.
std::vector<double>
gauss_lobatto_points(int degree);

QuadratureRule2D
tensor_gauss(int n);

QuadratureRule2D
tensor_gauss(int nx, int ny);

} // namespace adwr
