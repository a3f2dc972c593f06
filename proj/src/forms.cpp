#include <adwr/errors.hpp>
#include <adwr/forms.hpp>
#include <adwr/parallel.hpp>

#include <cmath>

namespace adwr
{
LocalForms::LocalForms(const FeSpace &space, const CdrProblem &problem, const Discretization &disc)
  : space_(&space)
  , problem_(&problem)
  , disc_(disc)
  , table_(std::make_shared<ShapeTable>(space.element(), tensor_gauss(disc.volume_points())))
  , face_rule_(gauss_legendre(disc.face_points()))
{}

LocalForms::Workspace
LocalForms::workspace() const
{
  return Workspace{CellValues(table_), -1};
}

void
LocalForms::reinit(Workspace &ws, int k) const
{
  ws.k = k;
  ws.cv.reinit(space_->mesh(), space_->cell_id(k), disc_.delta0 != 0.0);
}

double
LocalForms::delta(const Workspace &ws) const
{
  return disc_.delta0 * std::sqrt(ws.cv.measure());
}

LocalOperators
LocalForms::operators(const Workspace &ws, double t) const
{
  const auto  &cv  = ws.cv;
  const int    n   = cv.n_dofs();
  const double eps = problem_->epsilon;
  const double dK  = delta(ws);

  LocalOperators o;
  o.M  = LocalMatrix::Zero(n, n);
  o.A  = LocalMatrix::Zero(n, n);
  o.S  = LocalMatrix::Zero(n, n);
  o.Sb = LocalMatrix::Zero(n, n);

  std::vector<double> bgrad(n), strong(n);
  for (int q = 0; q < cv.n_points(); ++q)
    {
      const Point &x  = cv.point(q);
      const Point  b  = problem_->b(x, t);
      const double al = problem_->alpha(x, t);
      const double w  = cv.JxW(q);
      for (int j = 0; j < n; ++j)
        {
          bgrad[j] = b.dot(cv.grad(q, j));
          if (dK != 0.0)
            strong[j] = -eps * cv.laplacian(q, j) + bgrad[j] + al * cv.value(q, j);
        }
      for (int i = 0; i < n; ++i)
        {
          const double vi = cv.value(q, i);
          for (int j = 0; j < n; ++j)
            {
              const double vj = cv.value(q, j);
              o.M(i, j) += w * vj * vi;
              o.A(i, j) += w * (eps * cv.grad(q, j).dot(cv.grad(q, i)) + bgrad[j] * vi + al * vj * vi);
              if (dK != 0.0)
                {
                  o.S(i, j) += w * dK * strong[j] * bgrad[i];
                  o.Sb(i, j) += w * dK * vj * bgrad[i];
                }
            }
        }
    }
  return o;
}

LocalVector
LocalForms::load(const Workspace &ws, double t) const
{
  const auto &cv = ws.cv;
  const int   n  = cv.n_dofs();
  LocalVector F  = LocalVector::Zero(n);
  for (int q = 0; q < cv.n_points(); ++q)
    {
      const double fw = problem_->f(cv.point(q), t) * cv.JxW(q);
      for (int i = 0; i < n; ++i)
        F[i] += fw * cv.value(q, i);
    }

  if (problem_->neumann.empty())
    return F;
  const auto         &mesh = space_->mesh();
  const int           cell = space_->cell_id(ws.k);
  const Cell         &c    = mesh.cell(cell);
  std::vector<double> phi;
  for (int f = 0; f < 4; ++f)
    {
      const auto it = problem_->neumann.find(c.boundary_id[f]);
      if (c.boundary_id[f] == interior_face || it == problem_->neumann.end())
        continue;
      const int tdir = index(face_tangent(f));
      for (std::size_t q = 0; q < face_rule_.size(); ++q)
        {
          const double s  = face_rule_.points[q];
          const Point  xi = f == 0 ? Point(s, 0) : f == 1 ? Point(1, s) : f == 2 ? Point(s, 1) : Point(0, s);
          const double ds = mesh.jacobian(cell, xi).col(tdir).norm();
          const double g  = it->second(mesh.map(cell, xi), t) * ds * face_rule_.weights[q];
          space_->element().evaluate(xi, phi);
          for (int i = 0; i < n; ++i)
            F[i] += g * phi[i];
        }
    }
  return F;
}

LocalVector
LocalForms::supg_load(const Workspace &ws, double t) const
{
  const auto &cv = ws.cv;
  const int   n  = cv.n_dofs();
  LocalVector F  = LocalVector::Zero(n);
  const double dK = delta(ws);
  if (dK == 0.0)
    return F;
  for (int q = 0; q < cv.n_points(); ++q)
    {
      const Point &x  = cv.point(q);
      const Point  b  = problem_->b(x, t);
      const double fw = dK * problem_->f(x, t) * cv.JxW(q);
      for (int i = 0; i < n; ++i)
        F[i] += fw * b.dot(cv.grad(q, i));
    }
  return F;
}

LocalVector
LocalForms::initial(const Workspace &ws) const
{
  const auto &cv = ws.cv;
  const int   n  = cv.n_dofs();
  LocalVector F  = LocalVector::Zero(n);
  for (int q = 0; q < cv.n_points(); ++q)
    {
      const double uw = problem_->u0(cv.point(q), 0.0) * cv.JxW(q);
      for (int i = 0; i < n; ++i)
        F[i] += uw * cv.value(q, i);
    }
  return F;
}

LocalVector
LocalForms::initial_supg(const Workspace &ws) const
{
  const auto &cv = ws.cv;
  const int   n  = cv.n_dofs();
  LocalVector F  = LocalVector::Zero(n);
  const double dK = delta(ws);
  if (dK == 0.0)
    return F;
  for (int q = 0; q < cv.n_points(); ++q)
    {
      const Point &x  = cv.point(q);
      const double uw = dK * problem_->u0(x, 0.0) * cv.JxW(q);
      const Point  b  = problem_->b(x, 0.0);
      for (int i = 0; i < n; ++i)
        F[i] += uw * b.dot(cv.grad(q, i));
    }
  return F;
}

SparseMatrix
assemble_matrix(const LocalForms &forms, double t, const std::function<LocalMatrix(const LocalOperators &)> &select)
{
  const auto &space = forms.space();
  const int   nc    = space.n_cells();
  const int   block = 4096;

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(nc) * space.element().n_dofs() * space.element().n_dofs());
  std::vector<LocalMatrix> local(block);
  for (int b0 = 0; b0 < nc; b0 += block)
    {
      const int b1 = std::min(nc, b0 + block);
      parallel_for(b0, b1, [&](int k) {
        auto ws = forms.workspace();
        forms.reinit(ws, k);
        local[k - b0] = select(forms.operators(ws, t));
      });
      for (int k = b0; k < b1; ++k)
        {
          const auto &d = space.cell_dofs(k);
          const auto &m = local[k - b0];
          for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
              if (m(i, j) != 0.0)
                trip.emplace_back(d[i], d[j], m(i, j));
        }
    }
  SparseMatrix A(space.n_dofs(), space.n_dofs());
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

SparseMatrix
assemble_mass(const LocalForms &forms)
{
  return assemble_matrix(forms, 0.0, [](const LocalOperators &o) { return o.M; });
}

SparseMatrix
assemble_inner_form(const LocalForms &forms, double t)
{
  return assemble_matrix(forms, t, [](const LocalOperators &o) { return o.A; });
}

Vector
assemble_vector(const LocalForms &forms,
                const std::function<LocalVector(const LocalForms &, const LocalForms::Workspace &)> &local)
{
  const auto              &space = forms.space();
  const int                nc    = space.n_cells();
  std::vector<LocalVector> parts(nc);
  parallel_for(0, nc, [&](int k) {
    auto ws = forms.workspace();
    forms.reinit(ws, k);
    parts[k] = local(forms, ws);
  });
  Vector v = Vector::Zero(space.n_dofs());
  for (int k = 0; k < nc; ++k)
    {
      const auto &d = space.cell_dofs(k);
      for (int i = 0; i < parts[k].size(); ++i)
        v[d[i]] += parts[k][i];
    }
  return v;
}

const TimeRule &
time_rule()
{
  static const TimeRule r = [] {
    const double h = 0.5 / std::sqrt(3.0);
    return TimeRule{{0.5 - h, 0.5 + h}, {0.5, 0.5}};
  }();
  return r;
}

} // namespace adwr
