#include <adwr/estimator.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace adwr;

namespace
{
LocalVector
local(const FeSpace &s, int k, const Vector &u)
{
  const auto &d = s.cell_dofs(k);
  LocalVector v(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    v[i] = u[d[i]];
  return v;
}

// p-space vector into the 2p space on the same mesh
Vector
embed_global(const FeSpace &ps, const FeSpace &qs, const Vector &u)
{
  const LocalInterpolation li(ps.degree());
  Vector                   r(qs.n_dofs());
  for (int k = 0; k < ps.n_cells(); ++k)
    {
      const LocalVector v = li.embed() * local(ps, k, u);
      const auto       &d = qs.cell_dofs(k);
      for (int i = 0; i < v.size(); ++i)
        r[d[i]] = v[i];
    }
  return r;
}
} // namespace

TEST_CASE("local interpolation operators are projections")
{
  for (int p : {1, 2, 3})
    {
      const LocalInterpolation li(p);
      const int                np = (p + 1) * (p + 1);
      CHECK((li.restrict_p() * li.embed() - LocalMatrix::Identity(np, np)).norm() < 1e-12);
      CHECK((li.restrict_h() * li.restrict_h() - li.restrict_h()).norm() < 1e-12);
      for (Axis a : {Axis::x, Axis::y})
        {
          const auto &R = li.restrict_dir(a);
          CHECK((R * R - R).norm() < 1e-12);
          // R_h is R_x R_y
        }
      CHECK((li.restrict_dir(Axis::x) * li.restrict_dir(Axis::y) - li.restrict_h()).norm() < 1e-12);
    }
}

TEST_CASE("patch interpolation is exact for degree 2p")
{
  for (int p : {1, 2})
    {
      auto m = create_rectangle_mesh({0, 2}, {0, 1}, 2, 1);
      m.refine({{0, Axis::x}, {1, Axis::x}});  // 2x1 patches
      m.refine_global(1);                      // now 2x2 patches below 2x1 parents
      FeSpace    ps(m, p), qs(m, 2 * p);
      const auto patches = m.build_patches();
      CHECK(patches.n_exceptions == 0);
      const int q = 2 * p;
      auto      f = [q](const Point &x, double) { return std::pow(x.x() - 0.3, q) * std::pow(x.y() + 0.2, q) + x.x(); };
      const Vector u = ps.interpolate(f), uq = qs.interpolate(f);
      const auto   I = interpolate_patch(ps, patches, u);
      for (int k = 0; k < ps.n_cells(); ++k)
        CHECK((I[k] - local(qs, k, uq)).norm() < 1e-11);

      // directional: x^q y^p is lifted exactly by I_2h,x; I_2h,y leaves it in Q_p
      auto g = [p, q](const Point &x, double) { return std::pow(x.x(), q) * std::pow(x.y(), p); };
      const Vector ug = ps.interpolate(g), gq = qs.interpolate(g);
      const auto   Ix = interpolate_patch(ps, patches, ug, Axis::x);
      const auto   Iy = interpolate_patch(ps, patches, ug, Axis::y);
      const LocalInterpolation li(p);
      for (int k = 0; k < ps.n_cells(); ++k)
        {
          CHECK((Ix[k] - local(qs, k, gq)).norm() < 1e-10);
          CHECK((Iy[k] - li.embed() * local(ps, k, ug)).norm() < 1e-10);
        }
    }
}

TEST_CASE("exception patches embed")
{
  auto m = create_rectangle_mesh({0, 1}, {0, 1}, 2, 2);
  m.refine({{0, Axis::x}});
  const auto patches = m.build_patches();
  FeSpace    ps(m, 1);
  CHECK(patches.n_exceptions == 3);
  const Vector u = Vector::LinSpaced(ps.n_dofs(), 0, 1);
  const auto   I = interpolate_patch(ps, patches, u);
  const LocalInterpolation li(1);
  int                      checked = 0;
  for (const auto &pt : patches.patches)
    if (pt.exception())
      {
        const int k = ps.active_index(pt.cells[0]);
        CHECK((I[k] - li.embed() * local(ps, k, u)).norm() < 1e-14);
        ++checked;
      }
  CHECK(checked == 3);
}

TEST_CASE("temporal reconstruction")
{
  const TimePartition tp({0, 0.2, 0.5, 1.0});
  TemporalReconstruction rec(tp);
  FeSpace *none = nullptr;
  SlabSolution u{none, tp, {Vector::Constant(1, 0.1), Vector::Constant(1, 0.35), Vector::Constant(1, 0.75)}};
  // values equal the midpoints, so E u(t) = t everywhere
  for (int i = 0; i < 3; ++i)
    for (double s : {0.0, 0.3, 1.0})
      {
        const double t = tp.start(i) + s * tp.tau(i);
        CHECK(rec.evaluate(u, i, t)[0] == doctest::Approx(t));
      }
  CHECK(rec.lines[2].ia == 1);
  CHECK(rec.lines[2].right_a + rec.lines[2].right_b == doctest::Approx(1));
  CHECK(TemporalReconstruction(TimePartition::uniform(1, 1)).identity);
}

TEST_CASE("estimator: exact interpolation data give zero indicators")
{
  // u bilinear in space, constant in time: every reconstruction is exact
  auto m = create_rectangle_mesh({0, 1}, {0, 1}, 2, 2);
  m.refine_global(1);
  FeSpace    ps(m, 1, {0, 1, 2, 3}), qs(m, 2, {0, 1, 2, 3});
  CdrProblem pb;
  auto       ub = [](const Point &x, double) { return 1 + x.x() + 2 * x.y() + x.x() * x.y(); };
  pb.u0       = ub;
  pb.epsilon  = 0.1;
  pb.b        = [](const Point &, double) { return Point(1, 0); };
  pb.f        = [](const Point &x, double) { return 1 + x.y(); }; // b.grad u
  for (int id = 0; id < 4; ++id)
    pb.dirichlet[id] = ub;
  const Discretization disc{1, 0.2};
  const auto           tp = TimePartition::uniform(1, 3);
  const auto           u  = solve_primal(ps, pb, disc, tp);
  for (const auto &v : u.values)
    CHECK((v - ps.interpolate(ub)).norm() < 1e-10);

  const auto goal    = combine({GoalFunctional{GoalKind::terminal_point, Point(0.4, 0.6), 0.1}}, {});
  const auto z       = solve_adjoint(qs, pb, disc, tp, goal.adjoint_loads(qs, tp));
  const auto patches = m.build_patches();
  const auto eta     = estimate(u, z, pb, disc, goal, patches);
  CHECK(std::abs(eta.eta_tau) < 1e-10);
  CHECK(std::abs(eta.eta_h_dir[0]) < 1e-10);
  CHECK(std::abs(eta.eta_h_dir[1]) < 1e-10);
}

TEST_CASE("estimator: localized eta_tau sums to the assembled global form")
{
  auto m = create_rectangle_mesh({0, 1}, {0, 1}, 2, 2);
  m.refine_global(1);
  m.refine({{m.active_cells()[0], Axis::x}});
  FeSpace    ps(m, 1, {0}), qs(m, 2, {0});
  CdrProblem pb;
  pb.epsilon      = 0.02;
  pb.b            = [](const Point &x, double) { return Point(1, x.x()); };
  pb.alpha        = [](const Point &, double) { return 0.3; };
  pb.f            = [](const Point &x, double t) { return std::exp(-t) * (1 + x.y()); };
  pb.u0           = [](const Point &x, double) { return x.x() * (1 - x.y()); };
  pb.dirichlet[0] = [](const Point &, double) { return 0.0; };
  const Discretization disc{1, 0.1};
  const auto           tp = TimePartition({0, 0.1, 0.3, 0.4, 0.7});
  const int            N  = tp.n_intervals();
  const auto           u  = solve_primal(ps, pb, disc, tp);
  const auto goal = combine({GoalFunctional{GoalKind::time_integrated_point, Point(0.55, 0.45), 0.2}}, {});
  const auto z    = solve_adjoint(qs, pb, disc, tp, goal.adjoint_loads(qs, tp));
  const auto eta  = estimate(u, z, pb, disc, goal, m.build_patches());

  // global oracle in the 2p space with assembled matrices
  LocalForms         f(qs, pb, disc);
  const SparseMatrix M = assemble_matrix(f, 0, [](const LocalOperators &o) { return o.M; });
  const SparseMatrix A = assemble_matrix(f, 0, [](const LocalOperators &o) { return o.A; });
  const Vector       U0 = assemble_vector(f, [](const LocalForms &lf, const LocalForms::Workspace &ws) { return lf.initial(ws); });
  const Vector       j  = goal.goals[0].load(qs);
  const auto        &tr = time_rule();
  TemporalReconstruction rec(tp);
  std::vector<Vector> uq;
  for (const auto &v : u.values)
    uq.push_back(embed_global(ps, qs, v));
  auto Ev = [&](const std::vector<Vector> &v, int n, bool right) {
    const auto &l = rec.lines[n];
    return right ? Vector(l.right_a * v[l.ia] + l.right_b * v[l.ib]) : Vector(l.left_a * v[l.ia] + l.left_b * v[l.ib]);
  };
  double total = 0;
  Vector vprev = Vector::Zero(qs.n_dofs());
  for (int n = 0; n < N; ++n)
    {
      const double t0 = tp.start(n), tau = tp.tau(n);
      const Vector wl = Ev(z.values, n, false) - z.values[n], wr = Ev(z.values, n, true) - z.values[n];
      const Vector vl = Ev(uq, n, false) - uq[n], vr = Ev(uq, n, true) - uq[n];
      double       rho = -wl.dot(n > 0 ? Vector(M * (uq[n] - uq[n - 1])) : Vector(M * uq[0] - U0));
      double       rs  = -z.values[n].dot(M * (vr - vprev));
      double       J   = 0;
      for (int g = 0; g < 2; ++g)
        {
          const double t  = t0 + tau * tr.points[g];
          const Vector F  = assemble_vector(f, [t](const LocalForms &lf, const LocalForms::Workspace &ws) { return lf.load(ws, t); });
          const Vector w  = wl + tr.points[g] * (wr - wl);
          const Vector vv = vl + tr.points[g] * (vr - vl);
          rho += tau * tr.weights[g] * w.dot(F - A * uq[n]);
          rs -= tau * tr.weights[g] * z.values[n].dot(A * vv);
        }
      J = goal.goals[0].window_overlap(t0, t0 + tau) * j.dot(0.5 * (vl + vr));
      total += 0.5 * rho + 0.5 * (J + rs);
      vprev = vr;
    }
  CHECK(eta.eta_tau == doctest::Approx(total).epsilon(1e-10));

  double sum = 0;
  for (double v : eta.interval_eta_tau())
    sum += v;
  CHECK(sum == doctest::Approx(eta.eta_tau).epsilon(1e-12));
  double sx = 0;
  for (double v : eta.cell_eta_h(Axis::x))
    sx += v;
  CHECK(sx == doctest::Approx(eta.eta_h_dir[0]).epsilon(1e-12));
}

TEST_CASE("estimator: localized eta_h,i sums to the assembled global form")
{
  // uniform 2x2 patches without hanging nodes, so I_2h,i u is conforming and
  // the global pairings can be formed with assembled matrices
  auto m = create_rectangle_mesh({0, 1}, {0, 1}, 2, 2);
  m.refine_global(1);
  FeSpace    ps(m, 1, {0, 3}), qs(m, 2, {0, 3});
  CdrProblem pb;
  pb.epsilon      = 0.05;
  pb.b            = [](const Point &x, double) { return Point(1, 0.5 + x.x()); };
  pb.alpha        = [](const Point &, double) { return 0.5; };
  pb.f            = [](const Point &x, double t) { return (1 + t) * std::sin(3 * x.x()) * (1 + x.y()); };
  pb.u0           = [](const Point &x, double) { return x.y() * x.y(); };
  pb.dirichlet[0] = [](const Point &, double) { return 0.0; };
  pb.dirichlet[3] = [](const Point &, double) { return 0.0; };
  const Discretization disc{1, 0.3};
  const auto           tp = TimePartition({0, 0.2, 0.3, 0.6});
  const int            N  = tp.n_intervals();
  const auto           u  = solve_primal(ps, pb, disc, tp);
  const auto goal = combine({GoalFunctional{GoalKind::time_integrated_point, Point(0.6, 0.35), 0.2, 0.1, 0.5},
                             GoalFunctional{GoalKind::terminal_point, Point(0.3, 0.7), 0.15}},
                            {1.0, -0.5});
  const auto z       = solve_adjoint(qs, pb, disc, tp, goal.adjoint_loads(qs, tp));
  const auto patches = m.build_patches();
  const auto eta     = estimate(u, z, pb, disc, goal, patches);

  LocalForms         f(qs, pb, disc);
  const SparseMatrix M  = assemble_matrix(f, 0, [](const LocalOperators &o) { return o.M; });
  const SparseMatrix A  = assemble_matrix(f, 0, [](const LocalOperators &o) { return o.A; });
  const SparseMatrix S  = assemble_matrix(f, 0, [](const LocalOperators &o) { return o.S; });
  const SparseMatrix Sb = assemble_matrix(f, 0, [](const LocalOperators &o) { return o.Sb; });
  const Vector       U0 = assemble_vector(f, [](const LocalForms &lf, const LocalForms::Workspace &ws) { return lf.initial(ws); });
  const Vector U0s = assemble_vector(f, [](const LocalForms &lf, const LocalForms::Workspace &ws) { return lf.initial_supg(ws); });
  const auto  &tr  = time_rule();

  std::vector<Vector> uq;
  for (const auto &v : u.values)
    uq.push_back(embed_global(ps, qs, v));

  for (int d = 0; d < 2; ++d)
    {
      const Axis          axis = static_cast<Axis>(d);
      std::vector<Vector> v(N);
      for (int n = 0; n < N; ++n)
        {
          const auto loc = interpolate_patch(ps, patches, u.values[n], axis);
          v[n]           = Vector::Zero(qs.n_dofs());
          for (int k = 0; k < qs.n_cells(); ++k)
            {
              const auto &dofs = qs.cell_dofs(k);
              for (std::size_t i = 0; i < dofs.size(); ++i)
                v[n][dofs[i]] = loc[k][i];
            }
          v[n] -= uq[n];
        }
      double total = 0;
      for (int n = 0; n < N; ++n)
        {
          const double t0 = tp.start(n), tau = tp.tau(n);
          const Vector Riz = restrict_directional(qs, 1, z.values[n], axis);
          const Vector w   = z.values[n] - Riz;
          const Vector yh  = embed_global(ps, qs, restrict_degree(qs, ps, z.values[n]));
          const Vector dv  = n > 0 ? Vector(v[n] - v[n - 1]) : v[0];
          const Vector du  = n > 0 ? Vector(M * (uq[n] - uq[n - 1])) : Vector(M * uq[0] - U0);
          const Vector dus = n > 0 ? Vector(Sb * (uq[n] - uq[n - 1])) : Vector(Sb * uq[0] - U0s);

          double rho = -w.dot(du), supg = Riz.dot(dus);
          for (int g = 0; g < 2; ++g)
            {
              const double t  = t0 + tau * tr.points[g];
              const Vector F  = assemble_vector(f, [t](const LocalForms &lf, const LocalForms::Workspace &ws) { return lf.load(ws, t); });
              const Vector Fs = assemble_vector(f, [t](const LocalForms &lf, const LocalForms::Workspace &ws) { return lf.supg_load(ws, t); });
              rho += tau * tr.weights[g] * w.dot(F - A * uq[n]);
              supg += tau * tr.weights[g] * Riz.dot(S * uq[n] - Fs);
            }
          double J = 0;
          for (std::size_t g = 0; g < goal.goals.size(); ++g)
            {
              const auto  &gf = goal.goals[g];
              const Vector j  = gf.load(qs);
              if (gf.terminal())
                J += n == N - 1 ? goal.weights[g] * j.dot(v[n]) : 0.0;
              else
                J += goal.weights[g] * gf.window_overlap(t0, t0 + tau) * j.dot(v[n]);
            }
          const double rho_star = J - yh.dot(M * dv) - tau * yh.dot(A * v[n]);
          const double supg_lin = yh.dot(Sb * dv) + tau * yh.dot(S * v[n]);
          total += 0.5 * (rho + rho_star + supg + supg_lin);
        }
      CHECK(std::abs(total) > 1e-8);
      CHECK(eta.eta_h_dir[d] == doctest::Approx(total).epsilon(1e-10));
      double sum = 0;
      for (double c : eta.cell_eta_h(axis))
        sum += c;
      CHECK(sum == doctest::Approx(eta.eta_h_dir[d]).epsilon(1e-12));
    }
}

TEST_CASE("effectivity index")
{
  ErrorIndicators e;
  e.eta_tau      = 1;
  e.eta_h_dir[0] = 0.5;
  e.eta_h_dir[1] = 0.5;
  CHECK(effectivity_index(e, -4) == doctest::Approx(0.5));
  CHECK(std::isnan(effectivity_index(e, 0)));
}
