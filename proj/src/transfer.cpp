#include "vemg/transfer.hpp"

#include <algorithm>
#include <string>

#include "vemg/error.hpp"
#include "vemg/vem.hpp"

namespace vemg {

using Index = PolygonalMesh::Index;

std::string_view to_string(CoarseMode mode) {
  return mode == CoarseMode::inherited ? "inherited" : "noninherited";
}

CoarseMode parse_coarse_mode(std::string_view text) {
  if (text == "inherited") return CoarseMode::inherited;
  if (text == "noninherited" || text == "non-inherited" || text == "non_inherited")
    return CoarseMode::non_inherited;
  throw Error("unknown coarse operator mode '" + std::string(text) + "'");
}

SparseMatrix prolongation_matrix(const MeshHierarchy& h, int j, ProlongationRows rows) {
  if (j < 2 || j > h.num_levels())
    throw Error("prolongation_matrix: level " + std::to_string(j) + " out of range");
  const PolygonalMesh& fine = h.mesh(j);
  const PolygonalMesh& coarse = h.mesh(j - 1);
  DofMap fine_dofs = make_dof_map(fine);
  DofMap coarse_dofs = make_dof_map(coarse);
  if (rows == ProlongationRows::all_vertices) {
    // every vertex is its own unknown
    for (auto* m : {&fine_dofs, &coarse_dofs}) {
      const std::size_t nv = m->dof_of_vertex.size();
      m->vertex_of_dof.resize(nv);
      for (std::size_t v = 0; v < nv; ++v) {
        m->dof_of_vertex[v] = static_cast<Index>(v);
        m->vertex_of_dof[v] = static_cast<Index>(v);
      }
    }
  }
  const auto& nodes = h.coarse_nodes(j);

  std::vector<Index> coarse_vertex_of(fine.num_vertices(), -1);
  for (std::size_t v = 0; v < nodes.size(); ++v)
    coarse_vertex_of[nodes[v]] = static_cast<Index>(v);

  // 0 = unassigned, 1 = copied coarse node, 2 = polynomial rule
  std::vector<int> rule(fine.num_vertices(), 0);
  std::vector<Triplet> entries;
  for (std::size_t v = 0; v < fine.num_vertices(); ++v) {
    const Index cv = coarse_vertex_of[v];
    if (cv < 0) continue;
    rule[v] = 1;
    const Index row = fine_dofs.dof_of_vertex[v];
    const Index col = coarse_dofs.dof_of_vertex[cv];
    if (fine.is_boundary(static_cast<Index>(v)) != coarse.is_boundary(cv))
      throw Error("prolongation_matrix: boundary flags of coarse vertex " +
                  std::to_string(cv) + " disagree with the fine level");
    if (row >= 0) entries.push_back({row, col, 1.0});
  }

  const auto kids = h.children(j);
  for (std::size_t e = 0; e < coarse.num_cells(); ++e) {
    const auto cell = static_cast<Index>(e);
    const ElementProjectors proj = element_projectors(coarse, cell);
    const auto cverts = coarse.cell(cell);
    std::vector<Index> inside;
    for (Index child : kids[e])
      for (Index v : fine.cell(child))
        if (coarse_vertex_of[v] < 0) inside.push_back(v);
    std::sort(inside.begin(), inside.end());
    inside.erase(std::unique(inside.begin(), inside.end()), inside.end());

    for (Index v : inside) {
      if (rule[v] != 0)
        throw Error("prolongation_matrix: fine node " + std::to_string(v) +
                    " lies inside more than one agglomerate");
      rule[v] = 2;
      const Index row = fine_dofs.dof_of_vertex[v];
      if (fine.is_boundary(v))
        throw Error("prolongation_matrix: boundary node " + std::to_string(v) +
                    " inside agglomerate " + std::to_string(e));
      const Point& x = fine.vertex(v);
      for (std::size_t t = 0; t < cverts.size(); ++t) {
        const Index col = coarse_dofs.dof_of_vertex[cverts[t]];
        if (col < 0) continue;
        const Eigen::Vector3d c = proj.pi_star.col(static_cast<Eigen::Index>(t));
        entries.push_back({row, col, proj.evaluate(c, x)});
      }
    }
  }
  for (std::size_t v = 0; v < fine.num_vertices(); ++v)
    if (rule[v] == 0)
      throw Error("prolongation_matrix: fine node " + std::to_string(v) +
                  " belongs to no agglomerate");

  return SparseMatrix::from_triplets(static_cast<Index>(fine_dofs.size()),
                                     static_cast<Index>(coarse_dofs.size()),
                                     entries);
}

TransferSet::TransferSet(std::vector<SparseMatrix> operators,
                         std::vector<SparseMatrix> prolongations, CoarseMode mode)
    : operators_(std::move(operators)),
      prolongations_(std::move(prolongations)),
      mode_(mode) {
  if (operators_.empty() || prolongations_.size() != operators_.size())
    throw Error("TransferSet: inconsistent level count");
  for (std::size_t j = 0; j < operators_.size(); ++j) {
    if (operators_[j].rows() != operators_[j].cols())
      throw Error("TransferSet: operator not square");
    if (j == 0) continue;
    const auto& p = prolongations_[j];
    if (p.rows() != operators_[j].rows() || p.cols() != operators_[j - 1].rows())
      throw Error("TransferSet: prolongation shape mismatch at level " +
                  std::to_string(j + 1));
  }
}

TransferSet coarse_operators(const SparseMatrix& a_fine, const MeshHierarchy& h,
                             double mu, CoarseMode mode) {
  const int levels = h.num_levels();
  std::vector<SparseMatrix> ops(levels), prolong(levels);
  ops[levels - 1] = a_fine;
  for (int j = levels; j >= 2; --j) {
    prolong[j - 1] = prolongation_matrix(h, j);
    if (mode == CoarseMode::inherited) {
      ops[j - 2] = galerkin_product(prolong[j - 1], ops[j - 1]);
    } else {
      ops[j - 2] = assemble_system(h.mesh(j - 1), mu,
                                   [](const Point&) { return 0.0; })
                       .A;
    }
  }
  return TransferSet(std::move(ops), std::move(prolong), mode);
}

}  // namespace vemg
