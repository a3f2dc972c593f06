#include <adwr/errors.hpp>
#include <adwr/quadrature.hpp>
#include <adwr/reference_element.hpp>

namespace adwr
{
ReferenceElement::ReferenceElement(int p1, int p2)
  : deg_{{p1, p2}}
{
  if (p1 < 0 || p2 < 0 || p1 > 15 || p2 > 15)
    throw PreconditionError("ReferenceElement: degree out of range [0,15]");
  basis_[0] = LagrangeBasis1D(gauss_lobatto_points(p1));
  basis_[1] = LagrangeBasis1D(gauss_lobatto_points(p2));
}

Point
ReferenceElement::node(int i) const
{
  const int a = i % (deg_[0] + 1);
  const int b = i / (deg_[0] + 1);
  return {basis_[0].nodes()[a], basis_[1].nodes()[b]};
}

void
ReferenceElement::evaluate(const Point &x,
                           std::vector<double> &values,
                           std::vector<Eigen::Vector2d> *gradients,
                           std::vector<Eigen::Vector3d> *hessians) const
{
  const int n0 = deg_[0] + 1, n1 = deg_[1] + 1;
  double    v0[16], d0[16], dd0[16], v1[16], d1[16], dd1[16];
  basis_[0].evaluate(x[0], v0, d0, hessians ? dd0 : nullptr);
  basis_[1].evaluate(x[1], v1, d1, hessians ? dd1 : nullptr);

  values.resize(n0 * n1);
  if (gradients)
    gradients->resize(n0 * n1);
  if (hessians)
    hessians->resize(n0 * n1);
  for (int b = 0; b < n1; ++b)
    for (int a = 0; a < n0; ++a)
      {
        const int i = a + n0 * b;
        values[i]   = v0[a] * v1[b];
        if (gradients)
          (*gradients)[i] = {d0[a] * v1[b], v0[a] * d1[b]};
        if (hessians)
          (*hessians)[i] = {dd0[a] * v1[b], d0[a] * d1[b], v0[a] * dd1[b]};
      }
}

} // namespace adwr
