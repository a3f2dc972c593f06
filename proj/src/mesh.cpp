#include <adwr/errors.hpp>
#include <adwr/mesh.hpp>
#include <adwr/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace adwr
{
namespace
{
std::uint64_t
edge_key(int a, int b)
{
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

// reference position of corner k within its cell
const std::array<Point, 4> corner_ref = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
} // namespace

std::array<int, 2>
face_vertices(const Cell &c, int f)
{
  switch (f)
    {
      case 0:
        return {c.vertices[0], c.vertices[1]};
      case 1:
        return {c.vertices[1], c.vertices[2]};
      case 2:
        return {c.vertices[3], c.vertices[2]};
      default:
        return {c.vertices[0], c.vertices[3]};
    }
}

int
AnisoQuadMesh::add_vertex(const Point &p)
{
  vertices_.push_back(p);
  return static_cast<int>(vertices_.size()) - 1;
}

int
AnisoQuadMesh::add_root(const std::array<int, 4> &v, const RootMapping &mapping, const std::array<int, 4> &bids)
{
  for (int k = 0; k < 4; ++k)
    if ((vertices_.at(v[k]) - mapping.corner(k)).norm() > 1e-12 * (1 + vertices_[v[k]].norm()))
      throw GeometryError("add_root: vertex does not match mapping corner");

  Cell c;
  c.vertices    = v;
  c.root        = static_cast<int>(roots_.size());
  c.boundary_id = bids;
  roots_.push_back(mapping);
  cells_.push_back(c);
  const int id = static_cast<int>(cells_.size()) - 1;

  // reject inverted or degenerate roots early
  const auto rule = tensor_gauss(3);
  for (const auto &q : rule.points)
    if (jacobian(id, q).determinant() <= 0)
      throw GeometryError("add_root: non-positive Jacobian determinant");

  rebuild_active();
  return id;
}

MappingKind
AnisoQuadMesh::mapping_kind(int cell) const
{
  return roots_[cells_[cell].root].kind();
}

Point
AnisoQuadMesh::map(int cell, const Point &xi) const
{
  const Cell &c = cells_[cell];
  return roots_[c.root].point(c.lo + xi.cwiseProduct(c.hi - c.lo));
}

Tensor2
AnisoQuadMesh::jacobian(int cell, const Point &xi) const
{
  const Cell &c = cells_[cell];
  const Point h = c.hi - c.lo;
  Tensor2     j = roots_[c.root].jacobian(c.lo + xi.cwiseProduct(h));
  j.col(0) *= h[0];
  j.col(1) *= h[1];
  return j;
}

std::array<Point, 3>
AnisoQuadMesh::hessian(int cell, const Point &xi) const
{
  const Cell &c  = cells_[cell];
  const Point h  = c.hi - c.lo;
  auto        hs = roots_[c.root].hessian(c.lo + xi.cwiseProduct(h));
  hs[0] *= h[0] * h[0];
  hs[1] *= h[0] * h[1];
  hs[2] *= h[1] * h[1];
  return hs;
}

double
AnisoQuadMesh::cell_measure(int cell) const
{
  const auto rule = tensor_gauss(mapping_kind(cell) == MappingKind::curved ? 8 : 2);
  double     a    = 0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    a += rule.weights[q] * jacobian(cell, rule.points[q]).determinant();
  return a;
}

double
AnisoQuadMesh::total_measure() const
{
  double a = 0;
  for (int c : active_)
    a += cell_measure(c);
  return a;
}

int
AnisoQuadMesh::midpoint(int a, int b) const
{
  const auto it = midpoints_.find(edge_key(a, b));
  return it == midpoints_.end() ? -1 : it->second;
}

int
AnisoQuadMesh::get_or_create_midpoint(int cell, int a, int b, const Point &xi_a, const Point &xi_b)
{
  const auto key = edge_key(a, b);
  const auto it  = midpoints_.find(key);
  if (it != midpoints_.end())
    return it->second;
  const int m = add_vertex(map(cell, 0.5 * (xi_a + xi_b)));
  midpoints_.emplace(key, m);
  return m;
}

void
AnisoQuadMesh::split(int id, RefineCase how)
{
  if (how == RefineCase::none)
    return;
  if (!cells_[id].active())
    throw PreconditionError("split: cell already refined");

  const Cell p = cells_[id]; // copy, cells_ may reallocate
  const auto &v = p.vertices;
  const Point mid_root = 0.5 * (p.lo + p.hi);

  auto make_child = [&](std::array<int, 4> verts, Point lo, Point hi, std::array<int, 2> dl,
                        std::array<int, 4> bids) {
    Cell c;
    c.vertices    = verts;
    c.level       = {p.level[0] + dl[0], p.level[1] + dl[1]};
    c.parent      = id;
    c.root        = p.root;
    c.lo          = lo;
    c.hi          = hi;
    c.boundary_id = bids;
    cells_.push_back(c);
    return static_cast<int>(cells_.size()) - 1;
  };

  const auto &b = p.boundary_id;
  const int   I = interior_face;
  std::vector<int> kids;

  if (how == RefineCase::cut_x)
    {
      const int m0 = get_or_create_midpoint(id, v[0], v[1], corner_ref[0], corner_ref[1]);
      const int m2 = get_or_create_midpoint(id, v[3], v[2], corner_ref[3], corner_ref[2]);
      kids.push_back(make_child({v[0], m0, m2, v[3]}, p.lo, {mid_root[0], p.hi[1]}, {1, 0}, {b[0], I, b[2], b[3]}));
      kids.push_back(make_child({m0, v[1], v[2], m2}, {mid_root[0], p.lo[1]}, p.hi, {1, 0}, {b[0], b[1], b[2], I}));
    }
  else if (how == RefineCase::cut_y)
    {
      const int m3 = get_or_create_midpoint(id, v[0], v[3], corner_ref[0], corner_ref[3]);
      const int m1 = get_or_create_midpoint(id, v[1], v[2], corner_ref[1], corner_ref[2]);
      kids.push_back(make_child({v[0], v[1], m1, m3}, p.lo, {p.hi[0], mid_root[1]}, {0, 1}, {b[0], b[1], I, b[3]}));
      kids.push_back(make_child({m3, m1, v[2], v[3]}, {p.lo[0], mid_root[1]}, p.hi, {0, 1}, {I, b[1], b[2], b[3]}));
    }
  else
    {
      const int m0 = get_or_create_midpoint(id, v[0], v[1], corner_ref[0], corner_ref[1]);
      const int m1 = get_or_create_midpoint(id, v[1], v[2], corner_ref[1], corner_ref[2]);
      const int m2 = get_or_create_midpoint(id, v[3], v[2], corner_ref[3], corner_ref[2]);
      const int m3 = get_or_create_midpoint(id, v[0], v[3], corner_ref[0], corner_ref[3]);
      const int c  = add_vertex(map(id, Point(0.5, 0.5)));
      const Point &lo = p.lo, &hi = p.hi, &m = mid_root;
      kids.push_back(make_child({v[0], m0, c, m3}, lo, m, {1, 1}, {b[0], I, I, b[3]}));
      kids.push_back(make_child({m0, v[1], m1, c}, {m[0], lo[1]}, {hi[0], m[1]}, {1, 1}, {b[0], b[1], I, I}));
      kids.push_back(make_child({m3, c, m2, v[3]}, {lo[0], m[1]}, {m[0], hi[1]}, {1, 1}, {I, I, b[2], b[3]}));
      kids.push_back(make_child({c, m1, v[2], m2}, m, hi, {1, 1}, {I, b[1], b[2], I}));
    }
  cells_[id].refine_case = how;
  cells_[id].children    = std::move(kids);
}

void
AnisoQuadMesh::rebuild_active()
{
  active_.clear();
  for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
    if (cells_[i].active())
      active_.push_back(i);
}

std::vector<std::pair<int, int>>
AnisoQuadMesh::irregular_faces() const
{
  std::vector<std::pair<int, int>> bad;
  for (int id : active_)
    for (int f = 0; f < 4; ++f)
      {
        const auto [a, b] = face_vertices(cells_[id], f);
        const int m       = midpoint(a, b);
        if (m >= 0 && (midpoint(a, m) >= 0 || midpoint(m, b) >= 0))
          bad.emplace_back(id, f);
      }
  return bad;
}

int
AnisoQuadMesh::n_hanging_vertices() const
{
  std::set<int> hanging;
  for (int id : active_)
    for (int f = 0; f < 4; ++f)
      {
        const auto [a, b] = face_vertices(cells_[id], f);
        const int m       = midpoint(a, b);
        if (m >= 0)
          hanging.insert(m);
      }
  return static_cast<int>(hanging.size());
}

RefineStats
AnisoQuadMesh::refine(const std::vector<RefinementMark> &marks, bool patch_smoothing)
{
  std::map<int, RefineCase> pending;
  for (const auto &mk : marks)
    {
      if (mk.cell < 0 || mk.cell >= static_cast<int>(cells_.size()) || !cells_[mk.cell].active())
        throw StaleMarkError("refine: cell " + std::to_string(mk.cell) + " is not active");
      auto &rc = pending[mk.cell];
      rc       = rc | refine_case_for(mk.axis);
    }

  if (patch_smoothing)
    {
      auto extra = pending;
      for (const auto &[id, how] : pending)
        {
          const int parent = cells_[id].parent;
          if (parent < 0)
            continue;
          for (int s : cells_[parent].children)
            if (cells_[s].active())
              extra[s] = extra[s] | how;
        }
      pending.swap(extra);
    }

  RefineStats stats;
  for (const auto &[id, how] : pending)
    {
      split(id, how);
      ++stats.marked;
    }
  rebuild_active();

  // closure: split the coarse side of every face carrying a grandchild vertex
  for (;;)
    {
      const auto bad = irregular_faces();
      if (bad.empty())
        break;
      std::map<int, RefineCase> forced;
      for (const auto &[id, f] : bad)
        forced[id] = forced[id] | refine_case_for(face_tangent(f));
      for (const auto &[id, how] : forced)
        {
          split(id, how);
          ++stats.forced;
        }
      rebuild_active();
    }
  return stats;
}

void
AnisoQuadMesh::refine_global(int times)
{
  for (int k = 0; k < times; ++k)
    {
      const auto act = active_;
      for (int id : act)
        split(id, RefineCase::cut_xy);
      rebuild_active();
    }
}

double
AnisoQuadMesh::max_aspect_ratio() const
{
  const auto rule = tensor_gauss(3);
  double     ar   = 1.0;
  for (int id : active_)
    for (const auto &q : rule.points)
      {
        const Tensor2 j = jacobian(id, q);
        const double  d = j.determinant();
        if (!(d > 0))
          throw GeometryError("max_aspect_ratio: singular or inverted cell " + std::to_string(id));
        const double a    = j.squaredNorm();
        const double disc = std::sqrt(std::max(0.0, a * a - 4 * d * d));
        ar                = std::max(ar, (a + disc) / (2 * d));
      }
  return ar;
}

PatchSet
AnisoQuadMesh::build_patches() const
{
  PatchSet ps;
  ps.patch_of_cell.assign(cells_.size(), -1);
  for (int id : active_)
    {
      if (ps.patch_of_cell[id] >= 0)
        continue;
      const int parent = cells_[id].parent;
      Patch     p;
      bool      whole = parent >= 0;
      if (whole)
        for (int s : cells_[parent].children)
          whole = whole && cells_[s].active();
      if (whole)
        {
          p.parent = parent;
          p.cells  = cells_[parent].children;
          const auto rc = cells_[parent].refine_case;
          p.shape  = {cuts(rc, Axis::x) ? 2 : 1, cuts(rc, Axis::y) ? 2 : 1};
        }
      else
        {
          p.cells = {id};
          ++ps.n_exceptions;
        }
      const int pid = static_cast<int>(ps.patches.size());
      for (int c : p.cells)
        ps.patch_of_cell[c] = pid;
      ps.patches.push_back(std::move(p));
    }
  return ps;
}

std::optional<Point>
AnisoQuadMesh::inverse_map(int cell, const Point &x) const
{
  Point xi(0.5, 0.5);
  for (int it = 0; it < 60; ++it)
    {
      const Point   r = map(cell, xi) - x;
      const Tensor2 j = jacobian(cell, xi);
      if (std::abs(j.determinant()) < 1e-300)
        return std::nullopt;
      const Point dxi = j.inverse() * r;
      xi -= dxi;
      if (!xi.allFinite() || xi.norm() > 1e3)
        return std::nullopt;
      if (dxi.norm() < 1e-12)
        return xi;
    }
  return std::nullopt;
}

void
AnisoQuadMesh::apply_rotation(double angle)
{
  Tensor2 r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  for (auto &v : vertices_)
    v = r * v;
  for (auto &m : roots_)
    {
      std::array<Point, 4>     c;
      std::array<EdgeCurve, 4> f;
      for (int k = 0; k < 4; ++k)
        c[k] = r * m.corner(k);
      for (int k = 0; k < 4; ++k)
        {
          const auto &e = m.face(k);
          f[k] = e.arc ? EdgeCurve::circular(r * e.start, r * e.end, r * e.center)
                       : EdgeCurve::segment(r * e.start, r * e.end);
        }
      m = RootMapping(c, f);
    }
}

AnisoQuadMesh
create_rectangle_mesh(std::pair<double, double> xr, std::pair<double, double> yr, int nx, int ny)
{
  if (nx < 1 || ny < 1)
    throw GeometryError("create_rectangle_mesh: need at least one cell per direction");
  if (!(xr.second > xr.first) || !(yr.second > yr.first))
    throw GeometryError("create_rectangle_mesh: degenerate range");

  AnisoQuadMesh mesh;
  const double  hx = (xr.second - xr.first) / nx, hy = (yr.second - yr.first) / ny;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.add_vertex({i == nx ? xr.second : xr.first + i * hx, j == ny ? yr.second : yr.first + j * hy});
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      {
        const std::array<int, 4> v = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};
        std::array<Point, 4>      c;
        for (int k = 0; k < 4; ++k)
          c[k] = mesh.vertices()[v[k]];
        mesh.add_root(v,
                      RootMapping(c),
                      {j == 0 ? 2 : interior_face,
                       i == nx - 1 ? 1 : interior_face,
                       j == ny - 1 ? 3 : interior_face,
                       i == 0 ? 0 : interior_face});
      }
  return mesh;
}

AnisoQuadMesh
create_hemker_mesh()
{
  using namespace hemker_boundary;
  AnisoQuadMesh mesh;
  const Point   origin(0, 0);

  // circle points P_k and square points S_k on the rays at k*45 degrees
  std::array<int, 8> P{}, S{};
  const double       s2 = std::sqrt(0.5);
  const std::array<Point, 8> on_circle = {Point(1, 0), Point(s2, s2), Point(0, 1), Point(-s2, s2),
                                       Point(-1, 0), Point(-s2, -s2), Point(0, -1), Point(s2, -s2)};
  const std::array<Point, 8> square = {Point(3, 0), Point(3, 3), Point(0, 3), Point(-3, 3),
                                       Point(-3, 0), Point(-3, -3), Point(0, -3), Point(3, -3)};
  for (int k = 0; k < 8; ++k)
    P[k] = mesh.add_vertex(on_circle[k]);
  for (int k = 0; k < 8; ++k)
    S[k] = mesh.add_vertex(square[k]);
  const int e_top = mesh.add_vertex({8, 3});
  const int e_mid = mesh.add_vertex({8, 0});
  const int e_bot = mesh.add_vertex({8, -3});

  // outer square side of ring cell k, as seen from the ring
  const std::array<int, 8> outer_bid = {interior_face, wall, wall, inflow, inflow, wall, wall, interior_face};

  for (int k = 0; k < 8; ++k)
    {
      const int k1 = (k + 1) % 8;
      // xi runs radially, eta along the circle
      const std::array<Point, 4> c = {on_circle[k], square[k], square[k1], on_circle[k1]};
      const std::array<EdgeCurve, 4> f = {EdgeCurve::segment(c[0], c[1]),
                                          EdgeCurve::segment(c[1], c[2]),
                                          EdgeCurve::segment(c[3], c[2]),
                                          EdgeCurve::circular(c[0], c[3], origin)};
      mesh.add_root({P[k], S[k], S[k1], P[k1]}, RootMapping(c, f), {interior_face, outer_bid[k], interior_face, circle});
    }

  const auto rect = [&](std::array<int, 4> v, std::array<int, 4> bid) {
    std::array<Point, 4> c;
    for (int k = 0; k < 4; ++k)
      c[k] = mesh.vertices()[v[k]];
    mesh.add_root(v, RootMapping(c), bid);
  };
  rect({S[0], e_mid, e_top, S[1]}, {interior_face, outflow, wall, interior_face});
  rect({S[7], e_bot, e_mid, S[0]}, {wall, outflow, interior_face, interior_face});
  return mesh;
}

PointLocator::PointLocator(const AnisoQuadMesh &mesh)
  : mesh_(&mesh)
{
  const auto &act = mesh.active_cells();
  boxes_.resize(act.size());
  lo_ = Point::Constant(1e300);
  hi_ = Point::Constant(-1e300);
  for (std::size_t k = 0; k < act.size(); ++k)
    {
      Point a = Point::Constant(1e300), b = Point::Constant(-1e300);
      for (int j = 0; j <= 4; ++j)
        for (int i = 0; i <= 4; ++i)
          {
            const Point x = mesh.map(act[k], Point(i / 4.0, j / 4.0));
            a             = a.cwiseMin(x);
            b             = b.cwiseMax(x);
          }
      // curved faces may bulge between samples
      const double pad = (mesh.mapping_kind(act[k]) == MappingKind::curved ? 0.05 : 1e-10) * (b - a).maxCoeff();
      a -= Point::Constant(pad);
      b += Point::Constant(pad);
      boxes_[k] = {a[0], a[1], b[0], b[1]};
      lo_       = lo_.cwiseMin(a);
      hi_       = hi_.cwiseMax(b);
    }
  const int n = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(act.size()))));
  nx_         = n;
  ny_         = n;
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  const Point ext = hi_ - lo_;
  auto bucket = [&](double v, double l, double e, int cnt) {
    return std::clamp(static_cast<int>((v - l) / e * cnt), 0, cnt - 1);
  };
  for (std::size_t k = 0; k < act.size(); ++k)
    {
      const auto &bx = boxes_[k];
      const int   i0 = bucket(bx[0], lo_[0], ext[0], nx_), i1 = bucket(bx[2], lo_[0], ext[0], nx_);
      const int   j0 = bucket(bx[1], lo_[1], ext[1], ny_), j1 = bucket(bx[3], lo_[1], ext[1], ny_);
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
          buckets_[j * nx_ + i].push_back(static_cast<int>(k));
    }
}

std::pair<int, Point>
PointLocator::locate(const Point &x, int hint) const
{
  const auto &act = mesh_->active_cells();
  const double tol = 1e-10;
  bool         newton_failed = false;

  auto try_cell = [&](int cell) -> std::optional<Point> {
    const auto xi = mesh_->inverse_map(cell, x);
    if (!xi)
      {
        newton_failed = true;
        return std::nullopt;
      }
    if ((*xi)[0] < -tol || (*xi)[0] > 1 + tol || (*xi)[1] < -tol || (*xi)[1] > 1 + tol)
      return std::nullopt;
    return xi->cwiseMax(Point(0, 0)).cwiseMin(Point(1, 1));
  };

  if (hint >= 0 && hint < static_cast<int>(mesh_->cells().size()) && mesh_->cell(hint).active())
    if (const auto xi = try_cell(hint))
      return {hint, *xi};

  if (x[0] < lo_[0] || x[0] > hi_[0] || x[1] < lo_[1] || x[1] > hi_[1])
    throw NotFoundError("PointLocator: point outside mesh bounding box");
  const Point ext = hi_ - lo_;
  const int   i   = std::clamp(static_cast<int>((x[0] - lo_[0]) / ext[0] * nx_), 0, nx_ - 1);
  const int   j   = std::clamp(static_cast<int>((x[1] - lo_[1]) / ext[1] * ny_), 0, ny_ - 1);
  for (int k : buckets_[j * nx_ + i])
    {
      const auto &bx = boxes_[k];
      if (x[0] < bx[0] || x[0] > bx[2] || x[1] < bx[1] || x[1] > bx[3])
        continue;
      if (const auto xi = try_cell(act[k]))
        return {act[k], *xi};
    }
  if (newton_failed)
    throw MappingError("PointLocator: inverse mapping did not converge");
  throw NotFoundError("PointLocator: point not inside any active cell");
}

} // namespace adwr
