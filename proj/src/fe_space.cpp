#include <adwr/errors.hpp>
#include <adwr/fe_space.hpp>

#include <functional>
#include <unordered_map>

namespace adwr
{
namespace
{
std::uint64_t
key(int a, int b)
{
  return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint64_t>(std::max(a, b));
}
} // namespace

Vector
AffineConstraints::expand(const Vector &free, const Vector &g) const
{
  Vector u = C_ * free;
  if (G_.cols() > 0)
    u += G_ * g;
  return u;
}

Vector
AffineConstraints::restrict_to_free(const Vector &full) const
{
  Vector r(n_free_);
  for (int k = 0; k < n_free_; ++k)
    r[k] = full[free_dofs_[k]];
  return r;
}

void
AffineConstraints::distribute(Vector &u) const
{
  Vector     g(n_dirichlet());
  for (int k = 0; k < n_dirichlet(); ++k)
    g[k] = u[dirichlet_dofs_[k]];
  const Vector full = expand(restrict_to_free(u), g);
  for (const auto &[dof, line] : lines_)
    if (is_hanging(dof))
      u[dof] = full[dof];
}

FeSpace::FeSpace(const AnisoQuadMesh &mesh, int degree, std::set<int> dirichlet_ids)
  : mesh_(&mesh)
  , degree_(degree)
  , element_(degree)
  , dirichlet_ids_(std::move(dirichlet_ids))
{
  if (degree < 1)
    throw PreconditionError("FeSpace: degree must be at least 1");
  if (!mesh.irregular_faces().empty())
    throw PreconditionError("FeSpace: mesh is not one-irregular");

  const int   p   = degree;
  const auto &act = mesh.active_cells();
  active_index_.assign(mesh.cells().size(), -1);
  for (std::size_t k = 0; k < act.size(); ++k)
    active_index_[act[k]] = static_cast<int>(k);

  std::unordered_map<int, int>           vertex_dof;
  std::unordered_map<std::uint64_t, int> edge_base;
  int                                    next = 0;

  auto vdof = [&](int v) {
    auto [it, fresh] = vertex_dof.emplace(v, next);
    if (fresh)
      ++next;
    return it->second;
  };
  // k-th interior node of edge u->w counted from u
  auto edof = [&](int u, int w, int k) {
    auto [it, fresh] = edge_base.emplace(key(u, w), next);
    if (fresh)
      next += p - 1;
    return it->second + (u < w ? k - 1 : p - k - 1);
  };

  const auto &gl = element_.basis(0).nodes();
  cell_dofs_.resize(act.size());
  for (std::size_t k = 0; k < act.size(); ++k)
    {
      const Cell &c = mesh.cell(act[k]);
      const auto &v = c.vertices;
      auto       &d = cell_dofs_[k];
      d.resize((p + 1) * (p + 1));
      int interior = -1;
      for (int b = 0; b <= p; ++b)
        for (int a = 0; a <= p; ++a)
          {
            int dof;
            if (a == 0 && b == 0)
              dof = vdof(v[0]);
            else if (a == p && b == 0)
              dof = vdof(v[1]);
            else if (a == p && b == p)
              dof = vdof(v[2]);
            else if (a == 0 && b == p)
              dof = vdof(v[3]);
            else if (b == 0)
              dof = edof(v[0], v[1], a);
            else if (a == p)
              dof = edof(v[1], v[2], b);
            else if (b == p)
              dof = edof(v[3], v[2], a);
            else if (a == 0)
              dof = edof(v[0], v[3], b);
            else
              {
                if (interior < 0)
                  {
                    interior = next;
                    next += (p - 1) * (p - 1);
                  }
                dof = interior + (a - 1) + (p - 1) * (b - 1);
              }
            d[element_.local_index(a, b)] = dof;
          }
    }
  n_dofs_ = next;

  support_.resize(n_dofs_);
  for (std::size_t k = 0; k < act.size(); ++k)
    for (int i = 0; i < element_.n_dofs(); ++i)
      support_[cell_dofs_[k][i]] = mesh.map(act[k], element_.node(i));

  // face node dofs in parametrization order, end points included
  auto face_dofs = [&](int u, int w) {
    std::vector<int> r(p + 1);
    r[0] = vertex_dof.at(u);
    r[p] = vertex_dof.at(w);
    for (int k = 1; k < p; ++k)
      {
        if (!edge_base.count(key(u, w)))
          throw PreconditionError("FeSpace: fine edge without DoFs, mesh not one-irregular");
        r[k] = edof(u, w, k);
      }
    return r;
  };

  auto &cs = constraints_;
  cs.dirichlet_index_.assign(n_dofs_, -1);
  std::vector<int> dir_bid(n_dofs_, -1);
  for (std::size_t k = 0; k < act.size(); ++k)
    {
      const Cell &c = mesh.cell(act[k]);
      for (int f = 0; f < 4; ++f)
        if (c.boundary_id[f] != interior_face && dirichlet_ids_.count(c.boundary_id[f]))
          {
            const auto [u, w] = face_vertices(c, f);
            for (int dof : face_dofs(u, w))
              if (dir_bid[dof] < 0)
                dir_bid[dof] = c.boundary_id[f];
          }
    }

  const LagrangeBasis1D &l = element_.basis(0);
  for (std::size_t k = 0; k < act.size(); ++k)
    {
      const Cell &c = mesh.cell(act[k]);
      for (int f = 0; f < 4; ++f)
        {
          const auto [u, w] = face_vertices(c, f);
          const int m       = mesh.midpoint(u, w);
          if (m < 0)
            continue;
          const auto coarse = face_dofs(u, w);
          const auto left   = face_dofs(u, m);
          const auto right  = face_dofs(m, w);
          auto add_line = [&](int dof, double s) {
            if (dir_bid[dof] >= 0 || cs.lines_.count(dof))
              return;
            std::vector<std::pair<int, double>> line;
            for (int j = 0; j <= p; ++j)
              {
                const double wgt = l.value(j, s);
                if (std::abs(wgt) > 1e-14)
                  line.emplace_back(coarse[j], wgt);
              }
            cs.lines_[dof] = std::move(line);
          };
          for (int j = 1; j <= p; ++j)
            add_line(left[j], 0.5 * gl[j]);
          for (int j = 1; j < p; ++j)
            add_line(right[j], 0.5 + 0.5 * gl[j]);
        }
    }

  cs.free_index_.assign(n_dofs_, -1);
  for (int i = 0; i < n_dofs_; ++i)
    {
      if (dir_bid[i] >= 0)
        {
          cs.dirichlet_index_[i] = static_cast<int>(cs.dirichlet_dofs_.size());
          cs.dirichlet_dofs_.push_back(i);
          cs.dirichlet_bids_.push_back(dir_bid[i]);
        }
      else if (!cs.lines_.count(i))
        {
          cs.free_index_[i] = cs.n_free_++;
          cs.free_dofs_.push_back(i);
        }
    }

  // resolve chains of hanging relations onto free and Dirichlet dofs
  std::map<int, std::map<int, double>> resolved;
  std::function<const std::map<int, double> &(int, int)> resolve = [&](int dof, int depth) -> const std::map<int, double> & {
    if (depth > 64)
      throw PreconditionError("FeSpace: cyclic hanging-node constraints");
    auto it = resolved.find(dof);
    if (it != resolved.end())
      return it->second;
    std::map<int, double> out;
    if (!cs.is_hanging(dof))
      out[dof] = 1.0;
    else
      for (const auto &[master, wgt] : cs.lines_.at(dof))
        for (const auto &[mm, ww] : resolve(master, depth + 1))
          out[mm] += wgt * ww;
    return resolved.emplace(dof, std::move(out)).first->second;
  };

  std::vector<Triplet> tc, tg;
  for (int i = 0; i < n_dofs_; ++i)
    for (const auto &[m, wgt] : resolve(i, 0))
      {
        if (std::abs(wgt) < 1e-15)
          continue;
        if (cs.is_free(m))
          tc.emplace_back(i, cs.free_index_[m], wgt);
        else
          tg.emplace_back(i, cs.dirichlet_index_[m], wgt);
      }
  cs.C_.resize(n_dofs_, cs.n_free_);
  cs.C_.setFromTriplets(tc.begin(), tc.end());
  cs.G_.resize(n_dofs_, cs.n_dirichlet());
  cs.G_.setFromTriplets(tg.begin(), tg.end());

  locator_ = std::make_shared<PointLocator>(mesh);
}

Vector
FeSpace::interpolate(const ScalarFunction &f, double t) const
{
  Vector u(n_dofs_);
  for (int i = 0; i < n_dofs_; ++i)
    u[i] = f(support_[i], t);
  constraints_.distribute(u);
  return u;
}

Vector
FeSpace::dirichlet_values(const std::map<int, ScalarFunction> &data, double t) const
{
  const auto &cs = constraints_;
  Vector      g(cs.n_dirichlet());
  for (int k = 0; k < cs.n_dirichlet(); ++k)
    {
      const auto it = data.find(cs.dirichlet_ids()[k]);
      g[k]          = it == data.end() ? 0.0 : it->second(support_[cs.dirichlet_dofs()[k]], t);
    }
  return g;
}

double
FeSpace::evaluate_reference(const Vector &u, int cell, const Point &xi) const
{
  std::vector<double> phi;
  element_.evaluate(xi, phi);
  const auto &d = cell_dofs_.at(active_index_.at(cell));
  double      s = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    s += u[d[i]] * phi[i];
  return s;
}

double
FeSpace::evaluate(const Vector &u, const Point &x, int cell_hint) const
{
  if (u.size() != n_dofs_)
    throw PreconditionError("evaluate: coefficient vector has wrong length");
  const auto [cell, xi] = locator_->locate(x, cell_hint);
  return evaluate_reference(u, cell, xi);
}

} // namespace adwr
