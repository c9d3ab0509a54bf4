#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vemg {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct CellGeometry {
  double area = 0.0;
  Point centroid;
  double diameter = 0.0;
  std::vector<double> edge_lengths;  // edge k joins vertex k and k+1
};

// One level of a polygonal tessellation. Cells are counter-clockwise vertex
// cycles. Immutable after construction; per-cell geometry is cached.
class PolygonalMesh {
 public:
  using Index = std::int32_t;

  PolygonalMesh() = default;
  // Validates every cell (>= 3 distinct in-range vertices, simple, positive
  // signed area). Throws vemg::Error naming the offending cell.
  PolygonalMesh(std::vector<Point> vertices, std::vector<std::vector<Index>> cells,
                std::vector<bool> boundary_vertex, int level_tag = 0);

  // Same, with boundary flags derived from edges that have a single
  // incident cell.
  static PolygonalMesh with_topological_boundary(
      std::vector<Point> vertices, std::vector<std::vector<Index>> cells,
      int level_tag = 0);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(Index v) const { return vertices_[v]; }
  const std::vector<std::vector<Index>>& cells() const { return cells_; }
  std::span<const Index> cell(Index c) const { return cells_[c]; }
  const std::vector<bool>& boundary_vertex() const { return boundary_; }
  bool is_boundary(Index v) const { return boundary_[v]; }
  int level_tag() const { return level_tag_; }
  const CellGeometry& geometry(Index c) const { return geometry_[c]; }

  double total_area() const;
  // max cell diameter
  double mesh_size() const;
  std::size_t num_interior_vertices() const;

  // Edge-neighbours of every cell, ascending. Built on demand.
  std::vector<std::vector<Index>> cell_neighbors() const;

 private:
  std::vector<Point> vertices_;
  std::vector<std::vector<Index>> cells_;
  std::vector<bool> boundary_;
  int level_tag_ = 0;
  std::vector<CellGeometry> geometry_;
};

// Geometry of an arbitrary simple polygon given as a vertex cycle.
CellGeometry polygon_geometry(std::span<const Point> polygon);
double signed_area(std::span<const Point> polygon);

// Geometry of one cell; throws on an invalid id.
CellGeometry cell_geometry(const PolygonalMesh& mesh, PolygonalMesh::Index cell);

struct EdgeTopology {
  std::size_t interior_edges = 0;
  std::size_t boundary_edges = 0;
  // Edges shared by more than two cells, or traversed twice in the same
  // direction (orientation clash).
  std::size_t bad_edges = 0;
  bool manifold() const { return bad_edges == 0; }
};
EdgeTopology edge_topology(const PolygonalMesh& mesh);

// Unit-square mesh with (n+1)^2 vertices and 2n^2 triangles; every square is
// split along its (i+1,j)-(i,j+1) diagonal.
PolygonalMesh generate_structured_triangle_mesh(int n);

// Triangle .node/.ele reader (2D, attributes and markers ignored).
PolygonalMesh load_triangle_format(const std::filesystem::path& node_path,
                                   const std::filesystem::path& ele_path);

// Native text format:
//   vem-mesh 1
//   <num vertices>
//   x y boundary_flag        (one line per vertex)
//   <num cells>
//   k i1 ... ik              (0-based)
void write_native(const PolygonalMesh& mesh, std::ostream& out);
void write_native(const PolygonalMesh& mesh, const std::filesystem::path& path);
PolygonalMesh read_native(std::istream& in);
PolygonalMesh read_native(const std::filesystem::path& path);

struct QualityReport {
  std::vector<double> min_edge_ratio;  // min |e| / diameter, per cell
  std::vector<double> max_edge_ratio;  // max |e| / diameter, per cell
  double min_diameter = 0.0;
  double max_diameter = 0.0;
  double uniformity = 0.0;  // min diameter / max diameter
  std::vector<bool> star_shaped_wrt_centroid;
};

// True when the centroid lies strictly inside every edge's left half-plane,
// i.e. each boundary point is visible from the centroid.
bool star_shaped_wrt_centroid(std::span<const Point> polygon);

QualityReport mesh_quality(const PolygonalMesh& mesh);

struct SvgOptions {
  double size_px = 600.0;
  std::string stroke = "#1f3b73";
  std::string fill = "#dce6f5";
  double stroke_width = 1.0;
  bool show_vertices = false;
  double vertex_radius = 2.0;
};

void export_svg(const PolygonalMesh& mesh, const std::filesystem::path& path,
                const SvgOptions& options = {});
void export_svg(const PolygonalMesh& mesh, std::ostream& out,
                const SvgOptions& options = {});

}  // namespace vemg
