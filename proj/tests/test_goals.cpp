#include <adwr/errors.hpp>
#include <adwr/goals.hpp>

#include <doctest.h>

#include <cmath>

using namespace adwr;

TEST_CASE("mollifier has unit mass and peak alpha")
{
  for (double s : {0.05, 0.1, 5e-7})
    {
      MollifiedDelta d(Point(0.3, -0.2), s);
      CHECK(d.integrate([](const Point &) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(d(Point(0.3, -0.2)) == doctest::Approx(d.alpha()).epsilon(1e-14));
      CHECK(d(Point(0.3 + s, -0.2)) == 0.0);
      // alpha = 1/(2 pi s^2 I1)
      CHECK(d.alpha() * 2 * M_PI * s * s * MollifiedDelta::profile_moment() == doctest::Approx(1.0));
    }
  // independent value of the profile moment by a fine midpoint sum
  double    I = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i)
    {
      const double r = (i + 0.5) / n;
      I += std::exp(1 - 1 / (1 - r * r)) * r / n;
    }
  CHECK(MollifiedDelta::profile_moment() == doctest::Approx(I).epsilon(1e-8));
}

TEST_CASE("goal values on simple fields")
{
  auto    m = create_rectangle_mesh({0, 1}, {0, 1}, 4, 4);
  FeSpace s(m, 1);
  const auto tp = TimePartition::uniform(2.0, 4);

  SlabSolution one{&s, tp, std::vector<Vector>(4, Vector::Ones(s.n_dofs()))};
  GoalFunctional terminal{GoalKind::terminal_point, Point(0.4, 0.55), 0.05};
  CHECK(terminal.evaluate(one) == doctest::Approx(1.0).epsilon(1e-9));

  // point straddling cell faces and a partial window
  GoalFunctional integ{GoalKind::time_integrated_point, Point(0.5, 0.5), 0.1, 0.5, 1.75};
  CHECK(integ.evaluate(one) == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(integ.window_overlap(1.5, 2.0) == doctest::Approx(0.25));

  GoalFunctional whole{GoalKind::time_integrated_point, Point(0.5, 0.5), 0.1};
  CHECK(whole.evaluate_exact([](const Point &, double t) { return t; }, 2.0) ==
        doctest::Approx(2.0).epsilon(1e-9));

  GoalFunctional vol{GoalKind::volume_integral};
  vol.weight = [](const Point &x, double) { return x.x(); };
  CHECK(vol.evaluate(one) == doctest::Approx(0.5 * 2.0).epsilon(1e-12));
}

TEST_CASE("goal is linear and loads add up")
{
  auto    m = create_rectangle_mesh({0, 1}, {0, 1}, 3, 5);
  FeSpace s(m, 2);
  const auto tp = TimePartition::uniform(1.0, 3);
  auto f = [](const Point &x, double t) { return std::sin(4 * x.x()) * x.y() + t; };
  auto g = [](const Point &x, double) { return x.x() * x.x(); };
  SlabSolution a{&s, tp, {}}, b{&s, tp, {}}, c{&s, tp, {}};
  for (int n = 0; n < 3; ++n)
    {
      a.values.push_back(s.interpolate(f, tp.end(n)));
      b.values.push_back(s.interpolate(g, tp.end(n)));
      c.values.push_back(2 * a.values.back() - 3 * b.values.back());
    }
  GoalFunctional gp{GoalKind::time_integrated_point, Point(0.21, 0.63), 0.07};
  CHECK(gp.evaluate(c) == doctest::Approx(2 * gp.evaluate(a) - 3 * gp.evaluate(b)).epsilon(1e-12));

  auto twice = combine({gp, gp}, {});
  auto once  = combine({gp}, {});
  auto la = twice.adjoint_loads(s, tp), lb = once.adjoint_loads(s, tp);
  for (int n = 0; n < 3; ++n)
    CHECK((la[n] - 2 * lb[n]).norm() < 1e-12 * (1 + lb[n].norm()));

  auto signed_goal = combine({gp, gp}, {1.0, -1.0});
  CHECK(std::abs(signed_goal.evaluate(a)) < 1e-12);
  CHECK_THROWS_AS(combine({}, {}), PreconditionError);

  // the discrete value uses the load vector
  double via_load = 0;
  for (int n = 0; n < 3; ++n)
    via_load += lb[n].dot(a.values[n]);
  CHECK(via_load == doctest::Approx(gp.evaluate(a)).epsilon(1e-12));
}

TEST_CASE("smooth fields: discrete goal approaches the exact one")
{
  auto f = [](const Point &x, double) { return std::cos(2 * x.x()) * std::exp(x.y()); };
  GoalFunctional gp{GoalKind::terminal_point, Point(0.37, 0.41), 0.1};
  const double exact = gp.evaluate_exact(f, 1.0);
  double       prev  = 1;
  for (int n : {8, 16, 32})
    {
      auto    m = create_rectangle_mesh({0, 1}, {0, 1}, n, n);
      FeSpace s(m, 2);
      SlabSolution u{&s, TimePartition::uniform(1, 1), {s.interpolate(f, 1.0)}};
      const double err = std::abs(gp.evaluate(u) - exact);
      CHECK(err < prev);
      prev = err;
    }
  CHECK(prev < 1e-7);
}
