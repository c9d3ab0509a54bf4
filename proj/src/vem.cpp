#include "vemg/vem.hpp"

#include <cmath>
#include <string>

#include "vemg/error.hpp"

namespace vemg {

using Index = PolygonalMesh::Index;

ElementProjectors element_projectors(const PolygonalMesh& mesh, Index cell) {
  const CellGeometry& geo = cell_geometry(mesh, cell);
  const auto verts = mesh.cell(cell);
  const auto n = static_cast<Eigen::Index>(verts.size());

  ElementProjectors p;
  p.center = geo.centroid;
  p.scale = geo.diameter;
  const double h = geo.diameter;

  p.D.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point& x = mesh.vertex(verts[i]);
    p.D(i, 0) = 1.0;
    p.D(i, 1) = (x.x - p.center.x) / h;
    p.D(i, 2) = (x.y - p.center.y) / h;
  }

  // Boundary term of vertex i: (1/2) sum over its two edges of |e| n_e, with
  // |e| n_e = (dy, -dx) for a counter-clockwise edge.
  Eigen::MatrixXd flux(2, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point& prev = mesh.vertex(verts[(i + n - 1) % n]);
    const Point& next = mesh.vertex(verts[(i + 1) % n]);
    flux(0, i) = 0.5 * (next.y - prev.y);
    flux(1, i) = -0.5 * (next.x - prev.x);
  }

  p.B.resize(3, n);
  p.B.row(0).setConstant(1.0 / static_cast<double>(n));
  p.B.row(1) = flux.row(0) / h;
  p.B.row(2) = flux.row(1) / h;
  p.G = p.B * p.D;

  Eigen::FullPivLU<Eigen::Matrix3d> lu(p.G);
  if (!lu.isInvertible())
    throw Error("element_projectors: singular G on cell " + std::to_string(cell));
  p.pi_star = lu.solve(p.B);
  p.pi = p.D * p.pi_star;
  p.grad_avg = flux / geo.area;
  return p;
}

Eigen::MatrixXd element_stiffness(const ElementProjectors& proj,
                                  const CellGeometry& geometry, double mu) {
  const Eigen::Index n = proj.pi.rows();
  const Eigen::MatrixXd stab = Eigen::MatrixXd::Identity(n, n) - proj.pi;
  Eigen::MatrixXd k = geometry.area * proj.grad_avg.transpose() * proj.grad_avg +
                      stab.transpose() * stab;
  k *= mu;
  return k;
}

DofMap make_dof_map(const PolygonalMesh& mesh) {
  DofMap map;
  map.dof_of_vertex.assign(mesh.num_vertices(), -1);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary(static_cast<Index>(v))) continue;
    map.dof_of_vertex[v] = static_cast<Index>(map.vertex_of_dof.size());
    map.vertex_of_dof.push_back(static_cast<Index>(v));
  }
  return map;
}

double integrate_fan(std::span<const Point> polygon, const Point& apex,
                     const ScalarField& g) {
  double sum = 0.0;
  const std::size_t k = polygon.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % k];
    const double area =
        0.5 * ((a.x - apex.x) * (b.y - apex.y) - (b.x - apex.x) * (a.y - apex.y));
    const Point m1{0.5 * (apex.x + a.x), 0.5 * (apex.y + a.y)};
    const Point m2{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const Point m3{0.5 * (b.x + apex.x), 0.5 * (b.y + apex.y)};
    sum += area * (g(m1) + g(m2) + g(m3)) / 3.0;
  }
  return sum;
}

namespace {

std::vector<Point> cell_points(const PolygonalMesh& mesh, Index c) {
  std::vector<Point> poly;
  for (Index v : mesh.cell(c)) poly.push_back(mesh.vertex(v));
  return poly;
}

}  // namespace

AssembledSystem assemble_system(const PolygonalMesh& mesh, double mu,
                                const ScalarField& f,
                                LoadQuadrature quadrature) {
  AssembledSystem sys;
  sys.dofs = make_dof_map(mesh);
  const std::size_t ndof = sys.dofs.size();
  if (ndof == 0) throw Error("assemble_system: mesh has no interior vertex");
  sys.rhs.assign(ndof, 0.0);

  std::vector<Triplet> entries;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const ElementProjectors proj = element_projectors(mesh, cell);
    const CellGeometry& geo = mesh.geometry(cell);
    const Eigen::MatrixXd k = element_stiffness(proj, geo, mu);

    double f_mean = 0.0;
    if (quadrature == LoadQuadrature::centroid) {
      f_mean = f(geo.centroid);
    } else {
      f_mean = integrate_fan(cell_points(mesh, cell), geo.centroid, f) / geo.area;
    }

    const auto verts = mesh.cell(cell);
    for (std::size_t a = 0; a < verts.size(); ++a) {
      const Index row = sys.dofs.dof_of_vertex[verts[a]];
      if (row < 0) continue;
      // Cell mean of Pi^nabla phi_a: the linear monomials have zero mean
      // about the centroid.
      sys.rhs[row] += f_mean * geo.area * proj.pi_star(0, static_cast<Eigen::Index>(a));
      for (std::size_t b = 0; b < verts.size(); ++b) {
        const Index col = sys.dofs.dof_of_vertex[verts[b]];
        if (col < 0) continue;
        entries.push_back({row, col, k(static_cast<Eigen::Index>(a),
                                       static_cast<Eigen::Index>(b))});
      }
    }
  }
  const auto n = static_cast<Index>(ndof);
  sys.A = SparseMatrix::from_triplets(n, n, entries);
  return sys;
}

SparseMatrix assemble_full_stiffness(const PolygonalMesh& mesh, double mu) {
  std::vector<Triplet> entries;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const Eigen::MatrixXd k =
        element_stiffness(element_projectors(mesh, cell), mesh.geometry(cell), mu);
    const auto verts = mesh.cell(cell);
    for (std::size_t a = 0; a < verts.size(); ++a)
      for (std::size_t b = 0; b < verts.size(); ++b)
        entries.push_back({verts[a], verts[b],
                           k(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))});
  }
  const auto n = static_cast<Index>(mesh.num_vertices());
  return SparseMatrix::from_triplets(n, n, entries);
}

std::vector<double> interpolate(const PolygonalMesh& mesh, const ScalarField& g) {
  const DofMap map = make_dof_map(mesh);
  std::vector<double> out(map.size());
  for (std::size_t d = 0; d < map.size(); ++d)
    out[d] = g(mesh.vertex(map.vertex_of_dof[d]));
  return out;
}

ErrorNorms error_norms(const PolygonalMesh& mesh, std::span<const double> dofs,
                       const ScalarField& u_exact,
                       const VectorField& grad_u_exact) {
  const DofMap map = make_dof_map(mesh);
  if (dofs.size() != map.size())
    throw Error("error_norms: dof vector does not match the mesh");
  double l2 = 0.0, h1 = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const ElementProjectors proj = element_projectors(mesh, cell);
    const auto verts = mesh.cell(cell);
    Eigen::VectorXd local(static_cast<Eigen::Index>(verts.size()));
    for (std::size_t a = 0; a < verts.size(); ++a) {
      const Index d = map.dof_of_vertex[verts[a]];
      local(static_cast<Eigen::Index>(a)) = d < 0 ? 0.0 : dofs[d];
    }
    const Eigen::Vector3d coef = proj.pi_star * local;
    const Eigen::Vector2d grad = proj.grad_avg * local;
    const auto poly = cell_points(mesh, cell);
    const Point& apex = mesh.geometry(cell).centroid;
    l2 += integrate_fan(poly, apex, [&](const Point& p) {
      const double e = u_exact(p) - proj.evaluate(coef, p);
      return e * e;
    });
    h1 += integrate_fan(poly, apex, [&](const Point& p) {
      const Point g = grad_u_exact(p);
      const double ex = g.x - grad(0), ey = g.y - grad(1);
      return ex * ex + ey * ey;
    });
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

double projection_error(const PolygonalMesh& mesh, const ScalarField& u) {
  double sum = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const ElementProjectors proj = element_projectors(mesh, cell);
    const auto poly = cell_points(mesh, cell);
    Eigen::VectorXd local(static_cast<Eigen::Index>(poly.size()));
    for (std::size_t a = 0; a < poly.size(); ++a)
      local(static_cast<Eigen::Index>(a)) = u(poly[a]);
    const Eigen::Vector3d coef = proj.pi_star * local;
    sum += integrate_fan(poly, mesh.geometry(cell).centroid, [&](const Point& p) {
      const double e = u(p) - proj.evaluate(coef, p);
      return e * e;
    });
  }
  return std::sqrt(sum);
}

}  // namespace vemg
