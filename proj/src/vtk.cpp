#include <adwr/errors.hpp>
#include <adwr/vtk.hpp>

#include <fstream>
#include <iomanip>

namespace adwr
{
void
write_vtk(const std::string &path,
          const AnisoQuadMesh &mesh,
          const std::vector<std::pair<std::string, std::pair<const FeSpace *, const Vector *>>> &point_fields,
          const std::vector<NamedField> &cell_fields)
{
  std::ofstream os(path);
  if (!os)
    throw Error("write_vtk: cannot open " + path);
  os << std::setprecision(12);
  const auto &cells = mesh.active_cells();
  const int   nc    = static_cast<int>(cells.size());
  // corners in VTK quad order
  const std::array<Point, 4> corner{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};

  os << "# vtk DataFile Version 3.0\nadwr\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << 4 * nc << " double\n";
  for (int c : cells)
    for (const auto &xi : corner)
      {
        const Point x = mesh.map(c, xi);
        os << x.x() << ' ' << x.y() << " 0\n";
      }
  os << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (int k = 0; k < nc; ++k)
    os << "4 " << 4 * k << ' ' << 4 * k + 1 << ' ' << 4 * k + 2 << ' ' << 4 * k + 3 << '\n';
  os << "CELL_TYPES " << nc << '\n';
  for (int k = 0; k < nc; ++k)
    os << "9\n";

  if (!point_fields.empty())
    {
      os << "POINT_DATA " << 4 * nc << '\n';
      for (const auto &[name, field] : point_fields)
        {
          os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
          for (int c : cells)
            for (const auto &xi : corner)
              os << field.first->evaluate_reference(*field.second, c, xi) << '\n';
        }
    }
  if (!cell_fields.empty())
    {
      os << "CELL_DATA " << nc << '\n';
      for (const auto &[name, v] : cell_fields)
        {
          if (static_cast<int>(v.size()) != nc)
            throw PreconditionError("write_vtk: cell field " + name + " has wrong length");
          os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
          for (double x : v)
            os << x << '\n';
        }
    }
}
} // namespace adwr
