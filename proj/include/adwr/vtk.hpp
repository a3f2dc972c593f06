#pragma once

#include <adwr/fe_space.hpp>

#include <string>
#include <utility>
#include <vector>

namespace adwr
{
using NamedField = std::pair<std::string, std::vector<double>>;

/// Legacy ASCII unstructured grid with one quad per active cell. Point fields
/// are FE vectors (on any space over the mesh) sampled at the cell corners,
/// cell fields are indexed by active cell.
void write_vtk(const std::string &path,
               const AnisoQuadMesh &mesh,
               const std::vector<std::pair<std::string, std::pair<const FeSpace *, const Vector *>>> &point_fields,
               const std::vector<NamedField> &cell_fields);
} // namespace adwr
