#include <adwr/cell_values.hpp>
#include <adwr/errors.hpp>

namespace adwr
{
ShapeTable::ShapeTable(const ReferenceElement &e, const QuadratureRule2D &r)
  : element(&e)
  , rule(r)
{
  values.resize(rule.size());
  gradients.resize(rule.size());
  hessians.resize(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q)
    e.evaluate(rule.points[q], values[q], &gradients[q], &hessians[q]);
}

void
CellValues::reinit(const AnisoQuadMesh &mesh, int cell, bool need_laplacian)
{
  const int nq = n_points(), n = n_dofs();
  jxw_.resize(nq);
  x_.resize(nq);
  grad_.resize(static_cast<std::size_t>(nq) * n);
  if (need_laplacian)
    lap_.assign(static_cast<std::size_t>(nq) * n, 0.0);
  const bool affine = mesh.mapping_kind(cell) == MappingKind::affine;
  measure_          = 0;

  for (int q = 0; q < nq; ++q)
    {
      const Point  &xi  = table_->rule.points[q];
      const Tensor2 J   = mesh.jacobian(cell, xi);
      const double  det = J.determinant();
      if (!(det > 0))
        throw GeometryError("CellValues: non-positive Jacobian on cell " + std::to_string(cell));
      const Tensor2 Jinv  = J.inverse();
      const Tensor2 JinvT = Jinv.transpose();
      jxw_[q]             = det * table_->rule.weights[q];
      x_[q]               = mesh.map(cell, xi);
      measure_ += jxw_[q];

      std::array<Point, 3> HT{Point::Zero(), Point::Zero(), Point::Zero()};
      if (need_laplacian && !affine)
        HT = mesh.hessian(cell, xi);

      for (int i = 0; i < n; ++i)
        {
          const Eigen::Vector2d g = JinvT * table_->gradients[q][i];
          grad_[q * n + i]        = g;
          if (!need_laplacian)
            continue;
          const auto &h = table_->hessians[q][i];
          Tensor2     Hr;
          Hr << h[0], h[1], h[1], h[2];
          if (!affine)
            for (int k = 0; k < 2; ++k)
              {
                Tensor2 Tk;
                Tk << HT[0][k], HT[1][k], HT[1][k], HT[2][k];
                Hr -= g[k] * Tk;
              }
          lap_[q * n + i] = (JinvT * Hr * Jinv).trace();
        }
    }
}

} // namespace adwr
