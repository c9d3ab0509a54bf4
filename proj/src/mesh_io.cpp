#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "vemg/error.hpp"
#include "vemg/mesh.hpp"

namespace vemg {
namespace {

// Next non-empty line with '#' comments stripped, split into tokens.
bool next_record(std::istream& in, std::vector<std::string>& tokens) {
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ss(line);
    tokens.clear();
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (!tokens.empty()) return true;
  }
  return false;
}

long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw Error("");
    return v;
  } catch (...) {
    throw Error("malformed integer '" + s + "' in " + what);
  }
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw Error("");
    return v;
  } catch (...) {
    throw Error("malformed number '" + s + "' in " + what);
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

PolygonalMesh load_triangle_format(const std::filesystem::path& node_path,
                                   const std::filesystem::path& ele_path) {
  using Index = PolygonalMesh::Index;
  std::ifstream node = open_input(node_path);
  std::ifstream ele = open_input(ele_path);
  const std::string node_name = node_path.string();
  const std::string ele_name = ele_path.string();

  std::vector<std::string> tok;
  if (!next_record(node, tok) || tok.size() < 2)
    throw Error("malformed header in " + node_name);
  const long nv = parse_int(tok[0], node_name);
  const long dim = parse_int(tok[1], node_name);
  if (nv < 3 || dim != 2)
    throw Error("malformed header in " + node_name +
                ": need >= 3 vertices in 2 dimensions");

  std::vector<Point> vertices(static_cast<std::size_t>(nv));
  long base = 0;
  for (long k = 0; k < nv; ++k) {
    if (!next_record(node, tok) || tok.size() < 3)
      throw Error("truncated vertex list in " + node_name);
    const long idx = parse_int(tok[0], node_name);
    if (k == 0) {
      if (idx != 0 && idx != 1)
        throw Error("first vertex index must be 0 or 1 in " + node_name);
      base = idx;
    }
    if (idx != k + base)
      throw Error("vertex indices not consecutive in " + node_name);
    vertices[k] = {parse_real(tok[1], node_name), parse_real(tok[2], node_name)};
  }

  if (!next_record(ele, tok) || tok.size() < 2)
    throw Error("malformed header in " + ele_name);
  const long nt = parse_int(tok[0], ele_name);
  const long per = parse_int(tok[1], ele_name);
  if (nt < 1 || (per != 3 && per != 6))
    throw Error("malformed header in " + ele_name);

  std::vector<std::vector<Index>> cells(static_cast<std::size_t>(nt));
  for (long k = 0; k < nt; ++k) {
    if (!next_record(ele, tok) || tok.size() < 4)
      throw Error("truncated triangle list in " + ele_name);
    std::vector<Index> tri(3);
    for (int a = 0; a < 3; ++a) {
      const long v = parse_int(tok[1 + a], ele_name) - base;
      if (v < 0 || v >= nv)
        throw Error("triangle " + tok[0] + " in " + ele_name +
                    " references vertex " + tok[1 + a] + ": index out of range");
      tri[a] = static_cast<Index>(v);
    }
    const Point p[3] = {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
    const double a2 = signed_area(p);
    if (a2 == 0.0)
      throw Error("triangle " + tok[0] + " in " + ele_name + " is degenerate");
    if (a2 < 0.0) std::swap(tri[1], tri[2]);
    cells[k] = std::move(tri);
  }
  return PolygonalMesh::with_topological_boundary(std::move(vertices),
                                                  std::move(cells));
}

void write_native(const PolygonalMesh& mesh, std::ostream& out) {
  char buf[96];
  out << "vem-mesh 1\n" << mesh.num_vertices() << '\n';
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const Point& p = mesh.vertices()[v];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", p.x, p.y,
                  mesh.boundary_vertex()[v] ? 1 : 0);
    out << buf;
  }
  out << mesh.num_cells() << '\n';
  for (const auto& cell : mesh.cells()) {
    out << cell.size();
    for (auto v : cell) out << ' ' << v;
    out << '\n';
  }
}

void write_native(const PolygonalMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_native(mesh, out);
  if (!out) throw Error("write failed for " + path.string());
}

PolygonalMesh read_native(std::istream& in) {
  using Index = PolygonalMesh::Index;
  const std::string what = "vem-mesh input";
  std::vector<std::string> tok;
  if (!next_record(in, tok) || tok.size() != 2 || tok[0] != "vem-mesh" ||
      tok[1] != "1")
    throw Error("missing 'vem-mesh 1' header");
  if (!next_record(in, tok) || tok.size() != 1)
    throw Error("missing vertex count in " + what);
  const long nv = parse_int(tok[0], what);
  if (nv < 0) throw Error("negative vertex count in " + what);
  std::vector<Point> vertices(nv);
  std::vector<bool> boundary(nv);
  for (long v = 0; v < nv; ++v) {
    if (!next_record(in, tok) || tok.size() != 3)
      throw Error("malformed vertex line " + std::to_string(v) + " in " + what);
    vertices[v] = {parse_real(tok[0], what), parse_real(tok[1], what)};
    const long flag = parse_int(tok[2], what);
    if (flag != 0 && flag != 1)
      throw Error("boundary flag must be 0 or 1 in " + what);
    boundary[v] = flag == 1;
  }
  if (!next_record(in, tok) || tok.size() != 1)
    throw Error("missing cell count in " + what);
  const long nc = parse_int(tok[0], what);
  if (nc < 0) throw Error("negative cell count in " + what);
  std::vector<std::vector<Index>> cells(nc);
  for (long c = 0; c < nc; ++c) {
    if (!next_record(in, tok))
      throw Error("truncated cell list in " + what);
    const long k = parse_int(tok[0], what);
    if (k < 3 || static_cast<std::size_t>(k) + 1 != tok.size())
      throw Error("malformed cell line " + std::to_string(c) + " in " + what);
    for (long i = 0; i < k; ++i) {
      const long v = parse_int(tok[1 + i], what);
      if (v < 0 || v >= nv)
        throw Error("cell " + std::to_string(c) + " vertex index out of range");
      cells[c].push_back(static_cast<Index>(v));
    }
  }
  return PolygonalMesh(std::move(vertices), std::move(cells),
                       std::move(boundary));
}

PolygonalMesh read_native(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_native(in);
}

void export_svg(const PolygonalMesh& mesh, std::ostream& out,
                const SvgOptions& options) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (mesh.num_vertices() > 0) {
    xmin = xmax = mesh.vertices()[0].x;
    ymin = ymax = mesh.vertices()[0].y;
    for (const Point& p : mesh.vertices()) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const double margin = 10.0;
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
  const double scale = (options.size_px - 2 * margin) / span;
  auto sx = [&](double x) { return margin + (x - xmin) * scale; };
  // SVG y axis points down.
  auto sy = [&](double y) { return margin + (ymax - y) * scale; };

  char buf[128];
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                "width=\"%.0f\" height=\"%.0f\">\n",
                options.size_px, options.size_px);
  out << buf;
  out << "<g stroke=\"" << options.stroke << "\" fill=\"" << options.fill
      << "\" stroke-width=\"" << options.stroke_width
      << "\" stroke-linejoin=\"round\">\n";
  for (const auto& cell : mesh.cells()) {
    out << "<polygon points=\"";
    for (std::size_t i = 0; i < cell.size(); ++i) {
      const Point& p = mesh.vertex(cell[i]);
      std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", sx(p.x),
                    sy(p.y));
      out << buf;
    }
    out << "\"/>\n";
  }
  out << "</g>\n";
  if (options.show_vertices) {
    out << "<g fill=\"" << options.stroke << "\">\n";
    for (const Point& p : mesh.vertices()) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%g\"/>\n",
                    sx(p.x), sy(p.y), options.vertex_radius);
      out << buf;
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

void export_svg(const PolygonalMesh& mesh, const std::filesystem::path& path,
                const SvgOptions& options) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  export_svg(mesh, out, options);
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace vemg
