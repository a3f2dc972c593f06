#include <adwr/errors.hpp>
#include <adwr/mapping.hpp>

#include <cmath>
#include <numbers>

namespace adwr
{
EdgeCurve
EdgeCurve::segment(const Point &a, const Point &b)
{
  EdgeCurve e;
  e.start = a;
  e.end   = b;
  return e;
}

EdgeCurve
EdgeCurve::circular(const Point &a, const Point &b, const Point &center)
{
  EdgeCurve e;
  e.start  = a;
  e.end    = b;
  e.arc    = true;
  e.center = center;
  e.radius = (a - center).norm();
  if (std::abs((b - center).norm() - e.radius) > 1e-12 * std::max(1.0, e.radius))
    throw GeometryError("EdgeCurve: arc end points at different radii");
  e.theta0  = std::atan2(a[1] - center[1], a[0] - center[0]);
  double t1 = std::atan2(b[1] - center[1], b[0] - center[0]);
  double d  = t1 - e.theta0;
  while (d > std::numbers::pi)
    d -= 2 * std::numbers::pi;
  while (d < -std::numbers::pi)
    d += 2 * std::numbers::pi;
  e.dtheta = d;
  return e;
}

Point
EdgeCurve::point(double s) const
{
  if (!arc)
    return (1 - s) * start + s * end;
  // pin the end points exactly so shared vertices agree bitwise
  if (s == 0.0)
    return start;
  if (s == 1.0)
    return end;
  const double t = theta0 + s * dtheta;
  return center + radius * Point(std::cos(t), std::sin(t));
}

Point
EdgeCurve::d1(double s) const
{
  if (!arc)
    return end - start;
  const double t = theta0 + s * dtheta;
  return radius * dtheta * Point(-std::sin(t), std::cos(t));
}

Point
EdgeCurve::d2(double s) const
{
  if (!arc)
    return Point::Zero();
  const double t = theta0 + s * dtheta;
  return -radius * dtheta * dtheta * Point(std::cos(t), std::sin(t));
}

RootMapping::RootMapping(const std::array<Point, 4> &corners)
  : RootMapping(corners,
                {EdgeCurve::segment(corners[0], corners[1]),
                 EdgeCurve::segment(corners[1], corners[2]),
                 EdgeCurve::segment(corners[3], corners[2]),
                 EdgeCurve::segment(corners[0], corners[3])})
{}

RootMapping::RootMapping(const std::array<Point, 4> &corners, const std::array<EdgeCurve, 4> &faces)
  : c_(corners)
  , faces_(faces)
{
  const auto close = [](const Point &a, const Point &b) { return (a - b).norm() < 1e-12 * (1 + a.norm()); };
  if (!close(faces_[0].start, c_[0]) || !close(faces_[0].end, c_[1]) || !close(faces_[1].start, c_[1]) ||
      !close(faces_[1].end, c_[2]) || !close(faces_[2].start, c_[3]) || !close(faces_[2].end, c_[2]) ||
      !close(faces_[3].start, c_[0]) || !close(faces_[3].end, c_[3]))
    throw GeometryError("RootMapping: face curves do not match corners");

  bool curved = false;
  for (const auto &f : faces_)
    curved = curved || f.arc;
  if (curved)
    kind_ = MappingKind::curved;
  else if (((c_[1] - c_[0]) - (c_[2] - c_[3])).norm() < 1e-14 * (1 + c_[0].norm() + c_[2].norm()))
    kind_ = MappingKind::affine;
  else
    kind_ = MappingKind::bilinear;
}

Point
RootMapping::point(const Point &xi) const
{
  const double x = xi[0], y = xi[1];
  if (kind_ != MappingKind::curved)
    return (1 - x) * (1 - y) * c_[0] + x * (1 - y) * c_[1] + x * y * c_[2] + (1 - x) * y * c_[3];
  return (1 - y) * faces_[0].point(x) + y * faces_[2].point(x) + (1 - x) * faces_[3].point(y) +
         x * faces_[1].point(y) -
         ((1 - x) * (1 - y) * c_[0] + x * (1 - y) * c_[1] + x * y * c_[2] + (1 - x) * y * c_[3]);
}

Tensor2
RootMapping::jacobian(const Point &xi) const
{
  const double x = xi[0], y = xi[1];
  Point        dx, dy;
  if (kind_ != MappingKind::curved)
    {
      dx = (1 - y) * (c_[1] - c_[0]) + y * (c_[2] - c_[3]);
      dy = (1 - x) * (c_[3] - c_[0]) + x * (c_[2] - c_[1]);
    }
  else
    {
      dx = (1 - y) * faces_[0].d1(x) + y * faces_[2].d1(x) - faces_[3].point(y) + faces_[1].point(y) -
           ((1 - y) * (c_[1] - c_[0]) + y * (c_[2] - c_[3]));
      dy = -faces_[0].point(x) + faces_[2].point(x) + (1 - x) * faces_[3].d1(y) + x * faces_[1].d1(y) -
           ((1 - x) * (c_[3] - c_[0]) + x * (c_[2] - c_[1]));
    }
  Tensor2 j;
  j.col(0) = dx;
  j.col(1) = dy;
  return j;
}

std::array<Point, 3>
RootMapping::hessian(const Point &xi) const
{
  const double x = xi[0], y = xi[1];
  const Point  twist = c_[0] - c_[1] + c_[2] - c_[3];
  if (kind_ != MappingKind::curved)
    return {Point::Zero(), twist, Point::Zero()};
  return {(1 - y) * faces_[0].d2(x) + y * faces_[2].d2(x),
          -faces_[0].d1(x) + faces_[2].d1(x) - faces_[3].d1(y) + faces_[1].d1(y) - twist,
          (1 - x) * faces_[3].d2(y) + x * faces_[1].d2(y)};
}

} // namespace adwr
