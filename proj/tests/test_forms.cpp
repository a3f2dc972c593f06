#include <adwr/forms.hpp>
#include <adwr/linear_solver.hpp>

#include <doctest.h>

#include <cmath>

using namespace adwr;

namespace
{
SparseMatrix
select(const LocalForms &f, double t, LocalMatrix LocalOperators::*m)
{
  return assemble_matrix(f, t, [m](const LocalOperators &o) { return o.*m; });
}

double
total(const SparseMatrix &A)
{
  double s = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      s += it.value();
  return s;
}
} // namespace

TEST_CASE("Q1 stiffness on the unit square")
{
  auto       m = create_rectangle_mesh({0, 1}, {0, 1}, 1, 1);
  FeSpace    s(m, 1);
  CdrProblem pb;
  pb.epsilon = 1.0;
  LocalForms f(s, pb, {1, 0.0});
  auto       ws = f.workspace();
  f.reinit(ws, 0);
  const auto ops = f.operators(ws, 0);
  // local order (0,0), (1,0), (0,1), (1,1)
  CHECK(ops.A(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-13));
  CHECK(ops.A(0, 1) == doctest::Approx(-1.0 / 6).epsilon(1e-13));
  CHECK(ops.A(0, 2) == doctest::Approx(-1.0 / 6).epsilon(1e-13));
  CHECK(ops.A(0, 3) == doctest::Approx(-1.0 / 3).epsilon(1e-13));
  CHECK(ops.M(0, 0) == doctest::Approx(1.0 / 9).epsilon(1e-13));
  CHECK(ops.M(0, 3) == doctest::Approx(1.0 / 36).epsilon(1e-13));
  CHECK(ops.S.norm() == 0.0);
  CHECK(ops.Sb.norm() == 0.0);
}

TEST_CASE("mass sums to the area on the hemker mesh")
{
  auto m = create_hemker_mesh();
  m.refine_global(1);
  for (int p : {1, 2})
    {
      FeSpace    s(m, p);
      CdrProblem pb;
      LocalForms f(s, pb, {p, 0.0});
      // curved Jacobians are not polynomial, so only quadrature accuracy is expected
      CHECK(total(assemble_mass(f)) == doctest::Approx(m.total_measure()).epsilon(1e-5));
    }
  // the curved geometry itself: area of the box minus the disk
  CHECK(m.total_measure() == doctest::Approx(66 - M_PI).epsilon(1e-12));
}

TEST_CASE("convection of x integrates to the area")
{
  auto       m = create_rectangle_mesh({0, 2}, {0, 1}, 3, 2);
  FeSpace    s(m, 2);
  CdrProblem pb;
  pb.epsilon = 0;
  pb.b       = [](const Point &, double) { return Point(1, 0); };
  LocalForms   f(s, pb, {2, 0.0});
  const Vector x = s.interpolate([](const Point &p, double) { return p.x(); });
  const Vector r = select(f, 0, &LocalOperators::A) * x;
  CHECK(r.sum() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("load of f = 1 and stiffness annihilates constants")
{
  auto       m = create_rectangle_mesh({0, 1}, {0, 3}, 2, 3);
  FeSpace    s(m, 1);
  CdrProblem pb;
  pb.f       = [](const Point &, double) { return 1.0; };
  pb.epsilon = 0.3;
  LocalForms   f(s, pb, {1, 0.0});
  const Vector F = assemble_vector(f, [](const LocalForms &lf, const LocalForms::Workspace &ws) { return lf.load(ws, 0); });
  CHECK(F.sum() == doctest::Approx(3.0).epsilon(1e-13));
  const Vector one = Vector::Ones(s.n_dofs());
  CHECK((select(f, 0, &LocalOperators::A) * one).norm() < 1e-13);
}

TEST_CASE("supg terms scale with delta0 and vanish for delta0 = 0")
{
  auto       m = create_rectangle_mesh({0, 1}, {0, 1}, 2, 2);
  FeSpace    s(m, 1);
  CdrProblem pb;
  pb.epsilon = 1e-3;
  pb.b       = [](const Point &, double) { return Point(1, 0.5); };
  pb.f       = [](const Point &, double) { return 1.0; };
  LocalForms f0(s, pb, {1, 0.0}), f1(s, pb, {1, 0.1}), f2(s, pb, {1, 0.2});
  auto       w0 = f0.workspace(), w1 = f1.workspace(), w2 = f2.workspace();
  f0.reinit(w0, 0);
  f1.reinit(w1, 0);
  f2.reinit(w2, 0);
  CHECK(f0.operators(w0, 0).S.norm() == 0.0);
  CHECK(f0.supg_load(w0, 0).norm() == 0.0);
  CHECK(f1.delta(w1) == doctest::Approx(0.1 * 0.5));
  CHECK((f2.operators(w2, 0).S - 2 * f1.operators(w1, 0).S).norm() < 1e-14);
  // (1, b.grad phi) summed over phi: b.grad 1 = 0
  CHECK(std::abs(f1.supg_load(w1, 0).sum()) < 1e-14);
}

TEST_CASE("time rule integrates cubics")
{
  const auto &tr = time_rule();
  for (int k = 0; k <= 3; ++k)
    {
      double s = 0;
      for (int g = 0; g < 2; ++g)
        s += tr.weights[g] * std::pow(tr.points[g], k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
    }
}

TEST_CASE("sparse_solve on a small system")
{
  SparseMatrix A(3, 3);
  std::vector<Triplet> t{{0, 0, 4}, {0, 1, -1}, {1, 0, -1}, {1, 1, 4}, {1, 2, -1}, {2, 1, -1}, {2, 2, 4}};
  A.setFromTriplets(t.begin(), t.end());
  const Vector x = Vector::LinSpaced(3, 1, 3);
  const Vector b = A * x;
  CHECK((sparse_solve(A, b, SolverKind::direct) - x).norm() < 1e-13);
  CHECK((sparse_solve(A, b, SolverKind::iterative) - x).norm() < 1e-9);
  CHECK(parse_solver_kind("iterative") == SolverKind::iterative);
}
