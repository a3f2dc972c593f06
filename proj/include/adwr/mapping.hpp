#pragma once

#include <adwr/types.hpp>

#include <array>

namespace adwr
{
/// Straight segment or circular arc, parametrized on [0,1].
/// Arcs run linearly in angle along the shorter way from start to end.
struct EdgeCurve
{
  Point  start = Point::Zero();
  Point  end   = Point::Zero();
  bool   arc   = false;
  Point  center = Point::Zero();
  double radius = 0.0;
  double theta0 = 0.0;
  double dtheta = 0.0;

  static EdgeCurve segment(const Point &a, const Point &b);
  static EdgeCurve circular(const Point &a, const Point &b, const Point &center);

  Point point(double s) const;
  Point d1(double s) const;
  Point d2(double s) const;
};

enum class MappingKind
{
  affine,
  bilinear,
  curved
};

/// Transfinite (Gordon-Hall) map of the unit square onto a coarse cell.
///
/// Corners c0..c3 counterclockwise with c0 = T(0,0), c1 = T(1,0),
/// c2 = T(1,1), c3 = T(0,1). Faces: 0 bottom c0->c1, 1 right c1->c2,
/// 2 top c3->c2, 3 left c0->c3.
class RootMapping
{
public:
  RootMapping() = default;
  RootMapping(const std::array<Point, 4> &corners, const std::array<EdgeCurve, 4> &faces);

  /// Straight-sided cell.
  explicit RootMapping(const std::array<Point, 4> &corners);

  Point point(const Point &xi) const;
  /// Columns are dT/dxi and dT/deta.
  Tensor2 jacobian(const Point &xi) const;
  /// Second derivatives (xixi, xieta, etaeta), one 2-vector each.
  std::array<Point, 3> hessian(const Point &xi) const;

  MappingKind
  kind() const
  {
    return kind_;
  }

  const Point &
  corner(int i) const
  {
    return c_[i];
  }

  const EdgeCurve &
  face(int f) const
  {
    return faces_[f];
  }

private:
  std::array<Point, 4>     c_;
  std::array<EdgeCurve, 4> faces_;
  MappingKind              kind_ = MappingKind::affine;
};

} // namespace adwr
