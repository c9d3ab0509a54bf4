#pragma once

// Lowest-order enhanced virtual elements on polygonal meshes.
//
// The local polynomial basis is the scaled monomial set
//   m0 = 1, m1 = (x - xc)/h, m2 = (y - yc)/h
// centred at the cell centroid (xc, yc) with h the cell diameter. For k = 1
// the enhancement constraint makes the L2 projection onto P1 coincide with
// the elliptic projection, so Pi^nabla is used wherever Pi^0_1 appears.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "vemg/mesh.hpp"
#include "vemg/sparse.hpp"

namespace vemg {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

struct ElementProjectors {
  Point center;        // monomial centring point (cell centroid)
  double scale = 1.0;  // cell diameter
  Eigen::MatrixXd D;         // n x 3, D(i, g) = m_g(x_i)
  Eigen::MatrixXd B;         // 3 x n
  Eigen::Matrix3d G;         // B D
  Eigen::MatrixXd pi_star;   // 3 x n, G^{-1} B: Pi^nabla in monomial coordinates
  Eigen::MatrixXd pi;        // n x n, D G^{-1} B: Pi^nabla in vertex coordinates
  Eigen::MatrixXd grad_avg;  // 2 x n, cell average of grad(phi_i)

  // Value at p of the Pi^nabla polynomial whose monomial coefficients are c.
  double evaluate(const Eigen::Vector3d& c, const Point& p) const {
    return c(0) + c(1) * (p.x - center.x) / scale + c(2) * (p.y - center.y) / scale;
  }
};

// Throws vemg::Error naming the cell when G is singular.
ElementProjectors element_projectors(const PolygonalMesh& mesh,
                                     PolygonalMesh::Index cell);

// mu |E| GradAvg^T GradAvg + mu (I - Pi)^T (I - Pi)
Eigen::MatrixXd element_stiffness(const ElementProjectors& proj,
                                  const CellGeometry& geometry, double mu);

// Mapping between mesh vertices and interior (non-Dirichlet) unknowns.
struct DofMap {
  std::vector<PolygonalMesh::Index> dof_of_vertex;  // -1 on the boundary
  std::vector<PolygonalMesh::Index> vertex_of_dof;
  std::size_t size() const { return vertex_of_dof.size(); }
};
DofMap make_dof_map(const PolygonalMesh& mesh);

enum class LoadQuadrature {
  centroid,  // f evaluated at the cell centroid
  fan        // centroid fan, mid-edge rule on every sub-triangle
};

struct AssembledSystem {
  SparseMatrix A;
  std::vector<double> rhs;
  DofMap dofs;
};

// Homogeneous Dirichlet data; boundary unknowns are eliminated. Throws when
// the mesh has no interior vertex.
AssembledSystem assemble_system(const PolygonalMesh& mesh, double mu,
                                const ScalarField& f,
                                LoadQuadrature quadrature = LoadQuadrature::centroid);

// Stiffness over all vertices, before any boundary elimination.
SparseMatrix assemble_full_stiffness(const PolygonalMesh& mesh, double mu);

// Values of g at the interior vertices, in dof order.
std::vector<double> interpolate(const PolygonalMesh& mesh, const ScalarField& g);

struct ErrorNorms {
  double l2 = 0.0;  // || u - Pi^nabla u_h ||
  double h1 = 0.0;  // || grad u - GradAvg u_h ||
};

// Element-wise integration over the centroid fan of each cell with the
// mid-edge rule on every sub-triangle.
ErrorNorms error_norms(const PolygonalMesh& mesh, std::span<const double> dofs,
                       const ScalarField& u_exact,
                       const VectorField& grad_u_exact);

// || u - Pi^nabla(I_h u) ||_{L2} over the mesh, where I_h u samples u at all
// vertices (boundary included).
double projection_error(const PolygonalMesh& mesh, const ScalarField& u);

// Integral of g over a polygon by the same fan rule.
double integrate_fan(std::span<const Point> polygon, const Point& apex,
                     const ScalarField& g);

}  // namespace vemg
