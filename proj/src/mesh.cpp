#include "vemg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "vemg/error.hpp"

namespace vemg {
namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection test with exact zero for collinearity; inputs
// are mesh coordinates, so touching configurations are exact.
bool segments_touch(const Point& a, const Point& b, const Point& c,
                    const Point& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

std::string cell_name(std::size_t c) { return "cell " + std::to_string(c); }

void validate_cell(const std::vector<Point>& vertices,
                   std::span<const PolygonalMesh::Index> cell, std::size_t id) {
  const std::size_t k = cell.size();
  if (k < 3) throw Error(cell_name(id) + " has fewer than 3 vertices");
  for (auto v : cell)
    if (v < 0 || static_cast<std::size_t>(v) >= vertices.size())
      throw Error(cell_name(id) + " references vertex " + std::to_string(v) +
                  " out of range");
  std::vector<PolygonalMesh::Index> sorted(cell.begin(), cell.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(cell_name(id) + " repeats a vertex");

  std::vector<Point> poly(k);
  for (std::size_t i = 0; i < k; ++i) poly[i] = vertices[cell[i]];
  if (!(signed_area(poly) > 0.0))
    throw Error(cell_name(id) + " has non-positive signed area");

  for (std::size_t i = 0; i < k; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % k];
    const Point& c = poly[(i + 2) % k];
    // Adjacent edges may only share their common vertex.
    if (cross(a, b, c) == 0.0 &&
        (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y) < 0.0)
      throw Error(cell_name(id) + " folds back on itself");
    for (std::size_t j = i + 2; j < k; ++j) {
      if (i == 0 && j == k - 1) continue;
      if (segments_touch(a, b, poly[j], poly[(j + 1) % k]))
        throw Error(cell_name(id) + " is not a simple polygon");
    }
  }
}

std::vector<bool> topological_boundary(
    std::size_t num_vertices,
    const std::vector<std::vector<PolygonalMesh::Index>>& cells) {
  std::map<std::pair<PolygonalMesh::Index, PolygonalMesh::Index>, int> count;
  for (const auto& cell : cells)
    for (std::size_t i = 0; i < cell.size(); ++i) {
      auto a = cell[i], b = cell[(i + 1) % cell.size()];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  std::vector<bool> boundary(num_vertices, false);
  for (const auto& [edge, n] : count)
    if (n == 1) boundary[edge.first] = boundary[edge.second] = true;
  return boundary;
}

}  // namespace

double signed_area(std::span<const Point> polygon) {
  double twice = 0.0;
  const std::size_t k = polygon.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % k];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

CellGeometry polygon_geometry(std::span<const Point> polygon) {
  CellGeometry g;
  const std::size_t k = polygon.size();
  // Shift to the first vertex to limit cancellation in the shoelace sums.
  const Point o = polygon[0];
  double twice = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double ax = polygon[i].x - o.x, ay = polygon[i].y - o.y;
    const double bx = polygon[(i + 1) % k].x - o.x;
    const double by = polygon[(i + 1) % k].y - o.y;
    const double w = ax * by - bx * ay;
    twice += w;
    cx += (ax + bx) * w;
    cy += (ay + by) * w;
  }
  g.area = 0.5 * twice;
  g.centroid = {o.x + cx / (3.0 * twice), o.y + cy / (3.0 * twice)};
  g.edge_lengths.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % k];
    g.edge_lengths[i] = std::hypot(b.x - a.x, b.y - a.y);
    for (std::size_t j = i + 1; j < k; ++j)
      g.diameter = std::max(
          g.diameter, std::hypot(polygon[j].x - a.x, polygon[j].y - a.y));
  }
  return g;
}

PolygonalMesh::PolygonalMesh(std::vector<Point> vertices,
                             std::vector<std::vector<Index>> cells,
                             std::vector<bool> boundary_vertex, int level_tag)
    : vertices_(std::move(vertices)),
      cells_(std::move(cells)),
      boundary_(std::move(boundary_vertex)),
      level_tag_(level_tag) {
  if (boundary_.size() != vertices_.size())
    throw Error("boundary flag count does not match vertex count");
  geometry_.reserve(cells_.size());
  std::vector<Point> poly;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    validate_cell(vertices_, cells_[c], c);
    poly.clear();
    for (Index v : cells_[c]) poly.push_back(vertices_[v]);
    geometry_.push_back(polygon_geometry(poly));
  }
}

PolygonalMesh PolygonalMesh::with_topological_boundary(
    std::vector<Point> vertices, std::vector<std::vector<Index>> cells,
    int level_tag) {
  auto boundary = topological_boundary(vertices.size(), cells);
  return PolygonalMesh(std::move(vertices), std::move(cells),
                       std::move(boundary), level_tag);
}

double PolygonalMesh::total_area() const {
  double a = 0.0;
  for (const auto& g : geometry_) a += g.area;
  return a;
}

double PolygonalMesh::mesh_size() const {
  double h = 0.0;
  for (const auto& g : geometry_) h = std::max(h, g.diameter);
  return h;
}

std::size_t PolygonalMesh::num_interior_vertices() const {
  return static_cast<std::size_t>(
      std::count(boundary_.begin(), boundary_.end(), false));
}

std::vector<std::vector<PolygonalMesh::Index>> PolygonalMesh::cell_neighbors()
    const {
  std::map<std::pair<Index, Index>, std::vector<Index>> owners;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& cell = cells_[c];
    for (std::size_t i = 0; i < cell.size(); ++i) {
      auto a = cell[i], b = cell[(i + 1) % cell.size()];
      owners[{std::min(a, b), std::max(a, b)}].push_back(static_cast<Index>(c));
    }
  }
  std::vector<std::vector<Index>> nbrs(cells_.size());
  for (const auto& [edge, list] : owners)
    for (Index a : list)
      for (Index b : list)
        if (a != b) nbrs[a].push_back(b);
  for (auto& n : nbrs) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return nbrs;
}

CellGeometry cell_geometry(const PolygonalMesh& mesh,
                           PolygonalMesh::Index cell) {
  if (cell < 0 || static_cast<std::size_t>(cell) >= mesh.num_cells())
    throw Error("cell_geometry: invalid cell id " + std::to_string(cell));
  return mesh.geometry(cell);
}

EdgeTopology edge_topology(const PolygonalMesh& mesh) {
  using Index = PolygonalMesh::Index;
  // value: (number of incidences, number traversed low->high)
  std::map<std::pair<Index, Index>, std::pair<int, int>> edges;
  for (const auto& cell : mesh.cells())
    for (std::size_t i = 0; i < cell.size(); ++i) {
      auto a = cell[i], b = cell[(i + 1) % cell.size()];
      auto& e = edges[{std::min(a, b), std::max(a, b)}];
      ++e.first;
      if (a < b) ++e.second;
    }
  EdgeTopology t;
  for (const auto& [edge, e] : edges) {
    if (e.first == 1) {
      ++t.boundary_edges;
    } else if (e.first == 2 && e.second == 1) {
      ++t.interior_edges;
    } else {
      ++t.bad_edges;
    }
  }
  return t;
}

PolygonalMesh generate_structured_triangle_mesh(int n) {
  if (n < 1) throw Error("structured mesh needs n >= 1 subdivisions");
  using Index = PolygonalMesh::Index;
  const int m = n + 1;
  std::vector<Point> vertices;
  std::vector<bool> boundary;
  vertices.reserve(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      boundary.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  std::vector<std::vector<Index>> cells;
  cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Index v00 = j * m + i, v10 = v00 + 1;
      const Index v01 = v00 + m, v11 = v01 + 1;
      cells.push_back({v00, v10, v01});
      cells.push_back({v10, v11, v01});
    }
  return PolygonalMesh(std::move(vertices), std::move(cells),
                       std::move(boundary), 0);
}

bool star_shaped_wrt_centroid(std::span<const Point> polygon) {
  const Point c = polygon_geometry(polygon).centroid;
  const std::size_t k = polygon.size();
  for (std::size_t i = 0; i < k; ++i)
    if (!(cross(polygon[i], polygon[(i + 1) % k], c) > 0.0)) return false;
  return true;
}

QualityReport mesh_quality(const PolygonalMesh& mesh) {
  QualityReport q;
  const std::size_t nc = mesh.num_cells();
  q.min_edge_ratio.resize(nc);
  q.max_edge_ratio.resize(nc);
  q.star_shaped_wrt_centroid.resize(nc);
  q.min_diameter = nc ? mesh.geometry(0).diameter : 0.0;
  std::vector<Point> poly;
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& g = mesh.geometry(static_cast<PolygonalMesh::Index>(c));
    const auto [lo, hi] =
        std::minmax_element(g.edge_lengths.begin(), g.edge_lengths.end());
    q.min_edge_ratio[c] = *lo / g.diameter;
    q.max_edge_ratio[c] = *hi / g.diameter;
    q.min_diameter = std::min(q.min_diameter, g.diameter);
    q.max_diameter = std::max(q.max_diameter, g.diameter);
    poly.clear();
    for (auto v : mesh.cell(static_cast<PolygonalMesh::Index>(c)))
      poly.push_back(mesh.vertex(v));
    q.star_shaped_wrt_centroid[c] = star_shaped_wrt_centroid(poly);
  }
  q.uniformity = q.max_diameter > 0.0 ? q.min_diameter / q.max_diameter : 0.0;
  return q;
}

}  // namespace vemg
