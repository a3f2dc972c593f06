#include <adwr/errors.hpp>
#include <adwr/polynomial.hpp>

#include <cmath>

namespace adwr
{
LagrangeBasis1D::LagrangeBasis1D(std::vector<double> nodes)
  : nodes_(std::move(nodes))
{
  const int n = size();
  if (n == 0)
    throw PreconditionError("LagrangeBasis1D: empty node set");
  denominators_.assign(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i)
        {
          const double d = nodes_[i] - nodes_[j];
          if (std::abs(d) < 1e-14)
            throw PreconditionError("LagrangeBasis1D: repeated node");
          denominators_[i] *= d;
        }
}

double
LagrangeBasis1D::value(int i, double x) const
{
  double p = 1.0;
  for (int j = 0; j < size(); ++j)
    if (j != i)
      p *= x - nodes_[j];
  return p / denominators_[i];
}

double
LagrangeBasis1D::derivative(int i, double x) const
{
  // product rule; degrees are small so the O(n^2) loop is fine
  double s = 0.0;
  for (int k = 0; k < size(); ++k)
    {
      if (k == i)
        continue;
      double p = 1.0;
      for (int j = 0; j < size(); ++j)
        if (j != i && j != k)
          p *= x - nodes_[j];
      s += p;
    }
  return s / denominators_[i];
}

double
LagrangeBasis1D::second_derivative(int i, double x) const
{
  double s = 0.0;
  for (int k = 0; k < size(); ++k)
    {
      if (k == i)
        continue;
      for (int l = 0; l < size(); ++l)
        {
          if (l == i || l == k)
            continue;
          double p = 1.0;
          for (int j = 0; j < size(); ++j)
            if (j != i && j != k && j != l)
              p *= x - nodes_[j];
          s += p;
        }
    }
  return s / denominators_[i];
}

void
LagrangeBasis1D::evaluate(double x, double *v, double *d, double *dd) const
{
  for (int i = 0; i < size(); ++i)
    {
      v[i] = value(i, x);
      if (d)
        d[i] = derivative(i, x);
      if (dd)
        dd[i] = second_derivative(i, x);
    }
}

std::vector<double>
interpolation_matrix(const LagrangeBasis1D &from, const std::vector<double> &to)
{
  const int           m = static_cast<int>(to.size());
  const int           n = from.size();
  std::vector<double> e(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      e[i * n + j] = from.value(j, to[i]);
  return e;
}

} // namespace adwr
