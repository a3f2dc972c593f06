#pragma once

#include <adwr/mapping.hpp>
#include <adwr/types.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace adwr
{
enum class RefineCase : std::uint8_t
{
  none   = 0,
  cut_x  = 1,
  cut_y  = 2,
  cut_xy = 3
};

inline RefineCase
operator|(RefineCase a, RefineCase b)
{
  return static_cast<RefineCase>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}

inline bool
cuts(RefineCase c, Axis a)
{
  return (static_cast<std::uint8_t>(c) >> index(a)) & 1u;
}

inline RefineCase
refine_case_for(Axis a)
{
  return a == Axis::x ? RefineCase::cut_x : RefineCase::cut_y;
}

inline constexpr int interior_face = -1;

struct Cell
{
  std::array<int, 4> vertices{};  // counterclockwise, v0 at reference (0,0)
  std::array<int, 2> level{0, 0}; // refinement level per reference axis
  int                parent = -1;
  int                root   = 0;
  // sub-rectangle of the root's reference square covered by this cell
  Point              lo = Point(0, 0);
  Point              hi = Point(1, 1);
  RefineCase         refine_case = RefineCase::none;
  std::vector<int>   children;
  std::array<int, 4> boundary_id{interior_face, interior_face, interior_face, interior_face};

  bool
  active() const
  {
    return children.empty();
  }
};

struct RefinementMark
{
  int  cell;
  Axis axis;
};

struct RefineStats
{
  int marked = 0; // splits requested by marks
  int forced = 0; // splits added by the closure
};

/// A parent with all children active (2x2, 2x1 or 1x2), or a lone cell
/// without such a parent (shape 1x1, flagged as exception).
struct Patch
{
  int              parent = -1;
  std::vector<int> cells; // children in parent's lexicographic order, or the lone cell
  std::array<int, 2> shape{1, 1};

  bool
  exception() const
  {
    return shape[0] == 1 && shape[1] == 1;
  }
};

struct PatchSet
{
  std::vector<Patch> patches;
  std::vector<int>   patch_of_cell; // indexed by cell id, -1 for inactive cells
  int                n_exceptions = 0;
};

/// Vertex endpoints (in parametrization order) of face f of a cell.
std::array<int, 2>
face_vertices(const Cell &c, int f);

/// Reference axis tangent to face f.
inline Axis
face_tangent(int f)
{
  return (f == 0 || f == 2) ? Axis::x : Axis::y;
}

/// Quadrilateral forest with independent refinement per reference axis.
class AnisoQuadMesh
{
public:
  int add_vertex(const Point &p);
  /// Adds a coarse cell; boundary ids per face, interior_face for shared faces.
  int add_root(const std::array<int, 4> &vertices,
               const RootMapping &mapping,
               const std::array<int, 4> &boundary_ids);

  const std::vector<Point> &
  vertices() const
  {
    return vertices_;
  }

  const std::vector<Cell> &
  cells() const
  {
    return cells_;
  }

  const Cell &
  cell(int id) const
  {
    return cells_[id];
  }

  /// Active cell ids, ascending.
  const std::vector<int> &
  active_cells() const
  {
    return active_;
  }

  int
  n_active_cells() const
  {
    return static_cast<int>(active_.size());
  }

  const RootMapping &
  root_mapping(int root) const
  {
    return roots_[root];
  }

  MappingKind mapping_kind(int cell) const;

  Point   map(int cell, const Point &xi) const;
  Tensor2 jacobian(int cell, const Point &xi) const;
  /// Second derivatives of the cell map w.r.t. (xixi, xieta, etaeta).
  std::array<Point, 3> hessian(int cell, const Point &xi) const;

  double cell_measure(int cell) const;
  double total_measure() const;

  /// Vertex splitting edge (a,b), or -1.
  int midpoint(int a, int b) const;

  /// Splits marked cells and closes the mesh to one-irregularity.
  /// With patch_smoothing, active siblings of a refined cell are refined the
  /// same way, which keeps the estimator's patch structure intact.
  RefineStats refine(const std::vector<RefinementMark> &marks, bool patch_smoothing = false);
  void        refine_global(int times = 1);

  /// Active (cell, face) pairs violating one-irregularity. Empty on a valid mesh.
  std::vector<std::pair<int, int>> irregular_faces() const;

  /// Number of vertices lying in the interior of an active cell's face.
  int n_hanging_vertices() const;

  double max_aspect_ratio() const;

  PatchSet build_patches() const;

  /// Inverse of the cell map by Newton iteration.
  std::optional<Point> inverse_map(int cell, const Point &x) const;

  void apply_rotation(double angle); // rigid rotation about the origin (for tests)

private:
  int  get_or_create_midpoint(int cell, int a, int b, const Point &xi_a, const Point &xi_b);
  void split(int cell, RefineCase how);
  void rebuild_active();

  std::vector<Point>       vertices_;
  std::vector<Cell>        cells_;
  std::vector<RootMapping> roots_;
  std::vector<int>         active_;
  std::unordered_map<std::uint64_t, int> midpoints_;
};

/// Uniform nx x ny grid of axis-aligned cells.
/// Boundary ids: left 0, right 1, bottom 2, top 3.
AnisoQuadMesh
create_rectangle_mesh(std::pair<double, double> x_range,
                      std::pair<double, double> y_range,
                      int nx,
                      int ny);

/// Coarse mesh of ((-3,8)x(-3,3)) minus the unit disk: an 8-cell ring
/// around the circle plus two rectangles downstream.
/// Boundary ids: inflow x=-3 is 0, circle 1, top/bottom 2, outflow x=8 is 3.
AnisoQuadMesh
create_hemker_mesh();

namespace hemker_boundary
{
inline constexpr int inflow  = 0;
inline constexpr int circle  = 1;
inline constexpr int wall    = 2;
inline constexpr int outflow = 3;
} // namespace hemker_boundary

/// Bucket grid over active-cell bounding boxes.
class PointLocator
{
public:
  explicit PointLocator(const AnisoQuadMesh &mesh);

  /// Active cell containing x and the reference coordinates.
  /// Throws NotFoundError outside the domain, MappingError if Newton fails.
  std::pair<int, Point> locate(const Point &x, int hint = -1) const;

private:
  const AnisoQuadMesh             *mesh_;
  Point                            lo_, hi_;
  int                              nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>>    buckets_;
  std::vector<std::array<double, 4>> boxes_; // per active index
};

} // namespace adwr
