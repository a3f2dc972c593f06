#include <adwr/errors.hpp>
#include <adwr/goals.hpp>
#include <adwr/parallel.hpp>
#include <adwr/quadrature.hpp>

#include <cmath>
#include <numbers>

namespace adwr
{
namespace
{
double
bump(double rho2)
{
  return rho2 >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - rho2));
}

// int over reference sub-square [a0,a1]x[b0,b1] of g(x) * phi_i, refined
// towards the support disk of a mollifier
void
quadtree(const AnisoQuadMesh &mesh,
         int cell,
         const ReferenceElement &fe,
         const MollifiedDelta &delta,
         const QuadratureRule2D &rule,
         double a0, double a1, double b0, double b1,
         int depth,
         LocalVector &out)
{
  Point lo = Point::Constant(1e300), hi = Point::Constant(-1e300);
  for (int j = 0; j <= 2; ++j)
    for (int i = 0; i <= 2; ++i)
      {
        const Point x = mesh.map(cell, Point(a0 + 0.5 * i * (a1 - a0), b0 + 0.5 * j * (b1 - b0)));
        lo            = lo.cwiseMin(x);
        hi            = hi.cwiseMax(x);
      }
  const double diag = (hi - lo).norm();
  const double pad  = 0.1 * diag + 1e-14;
  lo -= Point::Constant(pad);
  hi += Point::Constant(pad);
  const Point  c    = delta.center();
  const Point  near = c.cwiseMax(lo).cwiseMin(hi);
  if ((near - c).norm() >= delta.cutoff())
    return;
  if (diag > delta.cutoff() / 8 && depth < 60)
    {
      const double am = 0.5 * (a0 + a1), bm = 0.5 * (b0 + b1);
      quadtree(mesh, cell, fe, delta, rule, a0, am, b0, bm, depth + 1, out);
      quadtree(mesh, cell, fe, delta, rule, am, a1, b0, bm, depth + 1, out);
      quadtree(mesh, cell, fe, delta, rule, a0, am, bm, b1, depth + 1, out);
      quadtree(mesh, cell, fe, delta, rule, am, a1, bm, b1, depth + 1, out);
      return;
    }
  std::vector<double> phi;
  const double        area = (a1 - a0) * (b1 - b0);
  for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const Point  xi = Point(a0 + rule.points[q][0] * (a1 - a0), b0 + rule.points[q][1] * (b1 - b0));
      const double d  = delta(mesh.map(cell, xi));
      if (d == 0.0)
        continue;
      const double w = d * rule.weights[q] * area * mesh.jacobian(cell, xi).determinant();
      fe.evaluate(xi, phi);
      for (int i = 0; i < fe.n_dofs(); ++i)
        out[i] += w * phi[i];
    }
}
} // namespace

MollifiedDelta::MollifiedDelta(const Point &center, double cutoff)
  : c_(center)
  , s_(cutoff)
{
  if (!(cutoff > 0))
    throw PreconditionError("MollifiedDelta: cutoff must be positive");
  alpha_ = 1.0 / (2 * std::numbers::pi * s_ * s_ * profile_moment());
}

double
MollifiedDelta::profile_moment()
{
  static const double value = [] {
    const auto   g      = gauss_legendre(10);
    const int    panels = 400;
    double       s      = 0;
    for (int p = 0; p < panels; ++p)
      for (std::size_t q = 0; q < g.size(); ++q)
        {
          const double rho = (p + g.points[q]) / panels;
          s += g.weights[q] / panels * bump(rho * rho) * rho;
        }
    return s;
  }();
  return value;
}

double
MollifiedDelta::operator()(const Point &x) const
{
  return alpha_ * bump((x - c_).squaredNorm() / (s_ * s_));
}

double
MollifiedDelta::integrate(const std::function<double(const Point &)> &g, int radial_panels, int angles) const
{
  const auto gr = gauss_legendre(6);
  double     s  = 0;
  for (int p = 0; p < radial_panels; ++p)
    for (std::size_t q = 0; q < gr.size(); ++q)
      {
        const double r  = s_ * (p + gr.points[q]) / radial_panels;
        const double wr = s_ * gr.weights[q] / radial_panels * r * alpha_ * bump(r * r / (s_ * s_));
        double       ring = 0;
        for (int k = 0; k < angles; ++k)
          {
            const double th = 2 * std::numbers::pi * k / angles;
            ring += g(c_ + r * Point(std::cos(th), std::sin(th)));
          }
        s += wr * ring * 2 * std::numbers::pi / angles;
      }
  return s;
}

GoalKind
parse_goal_kind(const std::string &s)
{
  if (s == "terminal_point")
    return GoalKind::terminal_point;
  if (s == "time_integrated_point")
    return GoalKind::time_integrated_point;
  if (s == "volume_integral")
    return GoalKind::volume_integral;
  throw ConfigError("unknown goal kind '" + s + "'");
}

std::string
to_string(GoalKind k)
{
  switch (k)
    {
      case GoalKind::terminal_point:
        return "terminal_point";
      case GoalKind::time_integrated_point:
        return "time_integrated_point";
      default:
        return "volume_integral";
    }
}

double
GoalFunctional::window_overlap(double a, double b) const
{
  return std::max(0.0, std::min(b, t_end) - std::max(a, t_begin));
}

CellLoads
GoalFunctional::cell_loads(const FeSpace &space) const
{
  const auto &mesh = space.mesh();
  const auto &fe   = space.element();
  const int   nc   = space.n_cells();
  std::vector<LocalVector> parts(nc);

  if (kind == GoalKind::volume_integral)
    {
      const auto rule = tensor_gauss(fe.degree(0) + 3);
      parallel_for(0, nc, [&](int k) {
        const int           cell = space.cell_id(k);
        LocalVector         v    = LocalVector::Zero(fe.n_dofs());
        std::vector<double> phi;
        for (std::size_t q = 0; q < rule.size(); ++q)
          {
            const Point &xi = rule.points[q];
            const double w  = (weight ? weight(mesh.map(cell, xi), 0.0) : 1.0) * rule.weights[q] *
                             mesh.jacobian(cell, xi).determinant();
            fe.evaluate(xi, phi);
            for (int i = 0; i < fe.n_dofs(); ++i)
              v[i] += w * phi[i];
          }
        parts[k] = std::move(v);
      });
    }
  else
    {
      const MollifiedDelta delta(center, cutoff);
      const auto           rule = tensor_gauss(6);
      parallel_for(0, nc, [&](int k) {
        LocalVector v = LocalVector::Zero(fe.n_dofs());
        quadtree(mesh, space.cell_id(k), fe, delta, rule, 0, 1, 0, 1, 0, v);
        if (v.cwiseAbs().maxCoeff() > 0)
          parts[k] = std::move(v);
      });
    }

  CellLoads out;
  for (int k = 0; k < nc; ++k)
    if (parts[k].size() > 0)
      out.emplace_back(k, std::move(parts[k]));
  return out;
}

Vector
GoalFunctional::load(const FeSpace &space) const
{
  Vector v = Vector::Zero(space.n_dofs());
  for (const auto &[k, lv] : cell_loads(space))
    {
      const auto &d = space.cell_dofs(k);
      for (int i = 0; i < lv.size(); ++i)
        v[d[i]] += lv[i];
    }
  return v;
}

double
GoalFunctional::evaluate(const SlabSolution &u) const
{
  const Vector j = load(*u.space);
  if (terminal())
    return j.dot(u.final_value());
  double s = 0;
  for (int i = 0; i < u.partition.n_intervals(); ++i)
    s += window_overlap(u.partition.start(i), u.partition.end(i)) * j.dot(u.values[i]);
  return s;
}

double
GoalFunctional::evaluate_exact(const ScalarFunction &u, double T, const AnisoQuadMesh *mesh) const
{
  auto spatial = [&](double t) {
    if (kind != GoalKind::volume_integral)
      {
        const MollifiedDelta delta(center, cutoff);
        return delta.integrate([&](const Point &x) { return u(x, t); });
      }
    if (!mesh)
      throw PreconditionError("evaluate_exact: volume goal needs a mesh");
    const auto rule = tensor_gauss(8);
    double     s    = 0;
    for (int c : mesh->active_cells())
      for (std::size_t q = 0; q < rule.size(); ++q)
        {
          const Point x = mesh->map(c, rule.points[q]);
          s += (weight ? weight(x, 0.0) : 1.0) * u(x, t) * rule.weights[q] *
               mesh->jacobian(c, rule.points[q]).determinant();
        }
    return s;
  };
  if (terminal())
    return spatial(T);

  const double a = std::max(0.0, t_begin), b = std::min(T, t_end);
  if (!(b > a))
    return 0.0;
  const auto g      = gauss_legendre(8);
  const int  panels = 16;
  double     s      = 0;
  for (int p = 0; p < panels; ++p)
    for (std::size_t q = 0; q < g.size(); ++q)
      s += (b - a) / panels * g.weights[q] * spatial(a + (b - a) * (p + g.points[q]) / panels);
  return s;
}

double
CombinedGoal::evaluate(const SlabSolution &u) const
{
  double s = 0;
  for (std::size_t i = 0; i < goals.size(); ++i)
    s += weights[i] * goals[i].evaluate(u);
  return s;
}

double
CombinedGoal::evaluate_exact(const ScalarFunction &u, double T, const AnisoQuadMesh *mesh) const
{
  double s = 0;
  for (std::size_t i = 0; i < goals.size(); ++i)
    s += weights[i] * goals[i].evaluate_exact(u, T, mesh);
  return s;
}

std::vector<Vector>
CombinedGoal::adjoint_loads(const FeSpace &space, const TimePartition &partition) const
{
  const int           N = partition.n_intervals();
  std::vector<Vector> rhs(N, Vector::Zero(space.n_dofs()));
  for (std::size_t g = 0; g < goals.size(); ++g)
    {
      const Vector j = goals[g].load(space);
      if (goals[g].terminal())
        rhs[N - 1] += weights[g] * j;
      else
        for (int i = 0; i < N; ++i)
          {
            const double w = goals[g].window_overlap(partition.start(i), partition.end(i));
            if (w > 0)
              rhs[i] += weights[g] * w * j;
          }
    }
  return rhs;
}

CombinedGoal
combine(std::vector<GoalFunctional> goals, std::vector<double> weights)
{
  if (goals.empty())
    throw PreconditionError("combine: empty goal list");
  if (weights.empty())
    weights.assign(goals.size(), 1.0);
  if (weights.size() != goals.size())
    throw PreconditionError("combine: one weight per goal required");
  for (double w : weights)
    if (!std::isfinite(w))
      throw PreconditionError("combine: weights must be finite");
  for (const auto &g : goals)
    if (!(g.cutoff > 0))
      throw PreconditionError("combine: cutoff radius must be positive");
  return CombinedGoal{std::move(goals), std::move(weights)};
}

} // namespace adwr
