#include <adwr/benchmarks.hpp>
#include <adwr/errors.hpp>
#include <adwr/mesh.hpp>

#include <cmath>
#include <sstream>

namespace adwr
{
namespace moving_hump
{
namespace
{
struct Hump
{
  double c; // 2/sqrt(eps)

  // spatial part g*h with gradient and Laplacian
  void
  eval(const Point &x, double &v, Point &grad, double &lap) const
  {
    const double X = x.x(), Y = x.y();
    const double g  = X * (1 - X) * Y * (1 - Y);
    const Point  gg((1 - 2 * X) * Y * (1 - Y), X * (1 - X) * (1 - 2 * Y));
    const double lg = -2 * Y * (1 - Y) - 2 * X * (1 - X);

    const Point  d  = x - Point(0.5, 0.5);
    const double q  = c * (r0 * r0 - d.squaredNorm());
    const Point  gq = -2 * c * d;
    const double lq = -4 * c;
    const double w  = 1 / (1 + q * q);
    const double h  = 0.5 + std::atan(q);
    const Point  gh = w * gq;
    const double lh = w * lq - 2 * q * w * w * gq.squaredNorm();

    v    = g * h;
    grad = h * gg + g * gh;
    lap  = h * lg + 2 * gg.dot(gh) + g * lh;
  }
};
} // namespace

ScalarFunction
exact(double epsilon)
{
  const Hump hp{2 / std::sqrt(epsilon)};
  return [hp](const Point &x, double t) {
    double v, lap;
    Point  g;
    hp.eval(x, v, g, lap);
    return 16 / M_PI * std::sin(M_PI * t) * v;
  };
}

CdrProblem
problem(double epsilon)
{
  if (!(epsilon > 0) || epsilon > 1)
    throw PreconditionError("moving hump: epsilon must lie in (0,1]");
  CdrProblem p;
  p.epsilon = epsilon;
  p.b       = [](const Point &, double) { return Point(2, 3); };
  p.alpha   = [](const Point &, double) { return 1.0; };
  p.T       = 0.5;
  const Hump hp{2 / std::sqrt(epsilon)};
  p.f = [hp, epsilon](const Point &x, double t) {
    double v, lap;
    Point  g;
    hp.eval(x, v, g, lap);
    const double S  = 16 / M_PI * std::sin(M_PI * t);
    const double St = 16 * std::cos(M_PI * t);
    return St * v + S * (-epsilon * lap + 2 * g.x() + 3 * g.y() + v);
  };
  p.u0 = [](const Point &, double) { return 0.0; };
  for (int id = 0; id < 4; ++id)
    p.dirichlet[id] = [](const Point &, double) { return 0.0; };
  return p;
}

std::vector<GoalFunctional>
goals(double cutoff)
{
  const double a = r0 / std::sqrt(2.0);
  return {GoalFunctional{GoalKind::terminal_point, Point(0.5 - a, 0.5 - a), cutoff},
          GoalFunctional{GoalKind::terminal_point, Point(0.5 + a, 0.5 + a), cutoff}};
}
} // namespace moving_hump

namespace hemker
{
CdrProblem
problem(double epsilon)
{
  CdrProblem p;
  p.epsilon = epsilon;
  p.b       = [](const Point &, double) { return Point(1, 0); };
  p.T       = 9.0;
  p.dirichlet[hemker_boundary::inflow] = [](const Point &, double) { return 0.0; };
  p.dirichlet[hemker_boundary::circle] = [](const Point &, double) { return 1.0; };
  return p;
}

std::vector<GoalFunctional>
goals(double cutoff_1, double cutoff_2)
{
  const double a = 1 / std::sqrt(2.0);
  return {GoalFunctional{GoalKind::time_integrated_point, Point(4, 1), cutoff_1},
          GoalFunctional{GoalKind::time_integrated_point, Point(-a - 1e-6, a + 1e-6), cutoff_2}};
}

Point
wall_point()
{
  const double a = 1 / std::sqrt(2.0);
  return {-a, a};
}

Point
wall_normal()
{
  const double a = 1 / std::sqrt(2.0);
  return {-a, a};
}
} // namespace hemker

namespace manufactured
{
ScalarFunction
exact(bool extruded)
{
  if (extruded)
    return [](const Point &x, double) { return std::sin(M_PI * x.x()); };
  return [](const Point &x, double) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); };
}

CdrProblem
problem(double epsilon, bool extruded, double T)
{
  CdrProblem p;
  p.epsilon = epsilon;
  p.T       = T;
  p.alpha   = [](const Point &, double) { return 1.0; };
  p.u0      = exact(extruded);
  const double pi = M_PI;
  if (extruded)
    {
      p.b = [](const Point &, double) { return Point(1, 0); };
      p.f = [epsilon, pi](const Point &x, double) {
        return (epsilon * pi * pi + 1) * std::sin(pi * x.x()) + pi * std::cos(pi * x.x());
      };
      for (int id : {0, 1})
        p.dirichlet[id] = [](const Point &, double) { return 0.0; };
      return p;
    }
  p.b = [](const Point &, double) { return Point(1, 0.5); };
  p.f = [epsilon, pi](const Point &x, double) {
    const double sx = std::sin(pi * x.x()), sy = std::sin(pi * x.y());
    const double cx = std::cos(pi * x.x()), cy = std::cos(pi * x.y());
    return (2 * epsilon * pi * pi + 1) * sx * sy + pi * cx * sy + 0.5 * pi * sx * cy;
  };
  for (int id = 0; id < 4; ++id)
    p.dirichlet[id] = [](const Point &, double) { return 0.0; };
  return p;
}

std::vector<GoalFunctional>
goals(bool extruded)
{
  GoalFunctional g{GoalKind::volume_integral};
  if (extruded)
    g.weight = [](const Point &x, double) { return x.x() * x.x(); };
  else
    g.weight = [](const Point &x, double) { return 1 + x.x() * x.y(); };
  return {g};
}
} // namespace manufactured

double
boundary_layer_width(const std::function<double(double)> &u, double lambda_min, double lambda_max, int samples)
{
  if (!(lambda_min > 0) || !(lambda_max > lambda_min) || samples < 2)
    throw PreconditionError("boundary_layer_width: bad lambda grid");
  std::vector<double> lam(samples), val(samples);
  const double        r = std::log(lambda_max / lambda_min) / (samples - 1);
  for (int i = 0; i < samples; ++i)
    {
      lam[i] = lambda_min * std::exp(r * i);
      val[i] = u(lam[i]);
    }
  auto crossing = [&](double level) {
    for (int i = samples - 2; i >= 0; --i)
      if ((val[i] - level) * (val[i + 1] - level) <= 0 && val[i] != val[i + 1])
        {
          double a = lam[i], b = lam[i + 1];
          double fa = val[i] - level;
          for (int it = 0; it < 100 && b - a > 1e-15 * b; ++it)
            {
              const double m  = 0.5 * (a + b);
              const double fm = u(m) - level;
              if ((fa <= 0) == (fm <= 0))
                {
                  a  = m;
                  fa = fm;
                }
              else
                b = m;
            }
          return 0.5 * (a + b);
        }
    double lo = val[0], hi = val[0];
    for (double v : val)
      {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    std::ostringstream os;
    os << "boundary_layer_width: level " << level << " not bracketed on [" << lambda_min << ", " << lambda_max
       << "], sampled range [" << lo << ", " << hi << "]";
    throw NotFoundError(os.str());
  };
  const double l1 = crossing(0.9), l0 = crossing(0.1);
  return std::abs(l0 - l1);
}

double
boundary_layer_width(const FeSpace &space, const Vector &u)
{
  const Point x0 = hemker::wall_point(), n = hemker::wall_normal();
  return boundary_layer_width([&](double l) { return space.evaluate(u, x0 + l * n); });
}

std::vector<CutPoint>
hemker_cut_lines(const FeSpace &space, const Vector &u, int points)
{
  std::vector<CutPoint> out;
  out.reserve(2 * points);
  for (int i = 0; i < points; ++i)
    {
      const double s = 6.0 * i / (points - 1);
      const Point  x(4.0, -3.0 + s);
      out.push_back({"interior", s, x, space.evaluate(u, x)});
    }
  const Point  x0 = hemker::wall_point(), n = hemker::wall_normal();
  const double lmin = 1e-9, lmax = 2.0;
  for (int i = 0; i < points; ++i)
    {
      const double l = i == 0 ? 0.0 : lmin * std::pow(lmax / lmin, double(i - 1) / (points - 2));
      const Point  x = x0 + l * n;
      out.push_back({"normal", l, x, space.evaluate(u, x)});
    }
  return out;
}

} // namespace adwr
