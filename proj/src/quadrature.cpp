#include <adwr/errors.hpp>
#include <adwr/quadrature.hpp>

#include <cmath>
#include <numbers>

namespace adwr
{
namespace
{
// P_n(x) and P_n'(x) on [-1,1] by the three-term recurrence.
std::pair<double, double>
legendre(int n, double x)
{
  double p0 = 1.0, p1 = x;
  if (n == 0)
    return {1.0, 0.0};
  for (int k = 2; k <= n; ++k)
    {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0              = p1;
      p1              = pk;
    }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}
} // namespace

QuadratureRule1D
gauss_legendre(int n)
{
  if (n < 1)
    throw PreconditionError("gauss_legendre: need at least one point");

  QuadratureRule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i)
    {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it)
        {
          const auto [p, dp] = legendre(n, x);
          const double dx    = p / dp;
          x -= dx;
          if (std::abs(dx) < 1e-16)
            break;
        }
      const auto [p, dp] = legendre(n, x);
      (void)p;
      // map from [-1,1] to [0,1]; ascending order
      rule.points[n - 1 - i]  = 0.5 * (x + 1.0);
      rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
  return rule;
}

std::vector<double>
gauss_lobatto_points(int degree)
{
  if (degree < 0)
    throw PreconditionError("gauss_lobatto_points: negative degree");
  if (degree == 0)
    return {0.5};

  std::vector<double> pts(degree + 1);
  pts.front() = 0.0;
  pts.back()  = 1.0;
  // interior points are the roots of P_degree'
  for (int i = 1; i < degree; ++i)
    {
      double x = -std::cos(std::numbers::pi * i / degree);
      for (int it = 0; it < 100; ++it)
        {
          const auto [p, dp] = legendre(degree, x);
          // (1-x^2) P'' = 2x P' - n(n+1) P
          const double d2p = (2.0 * x * dp - degree * (degree + 1.0) * p) / (1.0 - x * x);
          const double dx  = dp / d2p;
          x -= dx;
          if (std::abs(dx) < 1e-16)
            break;
        }
      pts[i] = 0.5 * (x + 1.0);
    }
  // symmetrize to kill roundoff
  for (int i = 0; i <= degree / 2; ++i)
    {
      const double a = 0.5 * (pts[i] + 1.0 - pts[degree - i]);
      pts[i]         = a;
      pts[degree - i] = 1.0 - a;
    }
  if (degree % 2 == 0)
    pts[degree / 2] = 0.5;
  return pts;
}

QuadratureRule2D
tensor_gauss(int n)
{
  return tensor_gauss(n, n);
}

QuadratureRule2D
tensor_gauss(int nx, int ny)
{
  const auto rx = gauss_legendre(nx);
  const auto ry = gauss_legendre(ny);

  QuadratureRule2D rule;
  rule.points.reserve(nx * ny);
  rule.weights.reserve(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      {
        rule.points.emplace_back(rx.points[i], ry.points[j]);
        rule.weights.push_back(rx.weights[i] * ry.weights[j]);
      }
  return rule;
}

} // namespace adwr
