#include <adwr/polynomial.hpp>
#include <adwr/quadrature.hpp>
#include <adwr/reference_element.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace adwr;

TEST_CASE("gauss-legendre integrates monomials up to degree 2n-1")
{
  for (int n = 1; n <= 8; ++n)
    {
      const auto r = gauss_legendre(n);
      for (int k = 0; k <= 2 * n - 1; ++k)
        {
          double s = 0;
          for (int q = 0; q < n; ++q)
            s += r.weights[q] * std::pow(r.points[q], k);
          CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("gauss-lobatto points")
{
  const auto p2 = gauss_lobatto_points(2);
  CHECK(p2[1] == 0.5);
  const auto p3 = gauss_lobatto_points(3);
  CHECK(p3[1] == doctest::Approx(0.5 * (1 - 1 / std::sqrt(5.0))).epsilon(1e-15));
  const auto p4 = gauss_lobatto_points(4);
  CHECK(p4[1] == doctest::Approx(0.5 * (1 - std::sqrt(3.0 / 7.0))).epsilon(1e-15));
}

TEST_CASE("lagrange basis derivatives match finite differences")
{
  const LagrangeBasis1D l(gauss_lobatto_points(4));
  const double          h = 1e-5;
  for (int i = 0; i <= 4; ++i)
    for (double x : {0.1, 0.37, 0.8})
      {
        CHECK(l.derivative(i, x) == doctest::Approx((l.value(i, x + h) - l.value(i, x - h)) / (2 * h)).epsilon(1e-8));
        CHECK(l.second_derivative(i, x) ==
              doctest::Approx((l.derivative(i, x + h) - l.derivative(i, x - h)) / (2 * h)).epsilon(1e-7));
      }
}

TEST_CASE("reference element nodal examples")
{
  std::vector<double> v;
  std::vector<Eigen::Vector2d> g;

  ReferenceElement q11(1, 1);
  q11.evaluate({0, 0}, v);
  CHECK(v == std::vector<double>{1, 0, 0, 0});

  ReferenceElement q21(2, 1);
  q21.evaluate({0.3, 0.71}, v, &g);
  double s = 0;
  Eigen::Vector2d gs = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < v.size(); ++i)
    {
      s += v[i];
      gs += g[i];
    }
  CHECK(s == doctest::Approx(1.0));
  CHECK(gs.norm() < 1e-13);

  ReferenceElement q22(2);
  q22.evaluate({0.5, 0.5}, v);
  for (int i = 0; i < 9; ++i)
    CHECK(v[i] == doctest::Approx(i == q22.local_index(1, 1) ? 1.0 : 0.0));
}

TEST_CASE("reference element dof count and nodal property for all degree pairs")
{
  std::vector<double> v;
  for (int p1 = 0; p1 <= 4; ++p1)
    for (int p2 = 0; p2 <= 4; ++p2)
      {
        ReferenceElement e(p1, p2);
        CHECK(e.n_dofs() == (p1 + 1) * (p2 + 1));
        for (int j = 0; j < e.n_dofs(); ++j)
          {
            e.evaluate(e.node(j), v);
            for (int i = 0; i < e.n_dofs(); ++i)
              CHECK(std::abs(v[i] - (i == j ? 1.0 : 0.0)) < 1e-12);
          }
      }
}

TEST_CASE("monomials are reproduced by nodal interpolation")
{
  std::mt19937                           rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<double>                    v;
  for (int p1 = 1; p1 <= 4; ++p1)
    for (int p2 = 1; p2 <= 4; ++p2)
      {
        ReferenceElement e(p1, p2);
        for (int a = 0; a <= p1; ++a)
          for (int b = 0; b <= p2; ++b)
            {
              auto mono = [&](const Point &x) { return std::pow(x[0], a) * std::pow(x[1], b); };
              double worst = 0;
              for (int t = 0; t < 100; ++t)
                {
                  const Point x(U(rng), U(rng));
                  e.evaluate(x, v);
                  double s = 0;
                  for (int i = 0; i < e.n_dofs(); ++i)
                    s += v[i] * mono(e.node(i));
                  worst = std::max(worst, std::abs(s - mono(x)));
                }
              CHECK(worst <= 1e-12);
            }
      }
}

TEST_CASE("reference hessians match finite differences")
{
  ReferenceElement             e(2, 3);
  std::vector<double>          v, vp, vm;
  std::vector<Eigen::Vector2d> g, gp, gm;
  std::vector<Eigen::Vector3d> h;
  const Point                  x(0.31, 0.62);
  const double                 d = 1e-6;
  e.evaluate(x, v, &g, &h);
  e.evaluate(x + Point(d, 0), vp, &gp);
  e.evaluate(x - Point(d, 0), vm, &gm);
  for (int i = 0; i < e.n_dofs(); ++i)
    {
      CHECK(h[i][0] == doctest::Approx((gp[i][0] - gm[i][0]) / (2 * d)).epsilon(1e-6));
      CHECK(h[i][1] == doctest::Approx((gp[i][1] - gm[i][1]) / (2 * d)).epsilon(1e-6));
    }
}
