#pragma once

#include <vector>

namespace adwr
{
/// Lagrange polynomials on a fixed set of distinct nodes in [0,1].
class LagrangeBasis1D
{
public:
  LagrangeBasis1D() = default;
  explicit LagrangeBasis1D(std::vector<double> nodes);

  int
  degree() const
  {
    return static_cast<int>(nodes_.size()) - 1;
  }

  int
  size() const
  {
    return static_cast<int>(nodes_.size());
  }

  const std::vector<double> &
  nodes() const
  {
    return nodes_;
  }

  double value(int i, double x) const;
  double derivative(int i, double x) const;
  double second_derivative(int i, double x) const;

  /// Fills v[i] = l_i(x), d[i] = l_i'(x), dd[i] = l_i''(x); d and dd may be null.
  void evaluate(double x, double *v, double *d, double *dd) const;

private:
  std::vector<double> nodes_;
  std::vector<double> denominators_;
};

/// Matrix E(i,j) = l_j(y_i): values of the basis on `from` at the points `to`.
/// Row-major, to.size() x from.size().
std::vector<double>
interpolation_matrix(const LagrangeBasis1D &from, const std::vector<double> &to);

} // namespace adwr
