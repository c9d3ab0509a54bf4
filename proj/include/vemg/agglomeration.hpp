#pragma once

#include <filesystem>
#include <vector>

#include "vemg/mesh.hpp"

namespace vemg {

struct Agglomerate {
  PolygonalMesh coarse;
  // fine cell -> coarse cell
  std::vector<PolygonalMesh::Index> parent;
  // coarse vertex -> the fine vertex at the same position
  std::vector<PolygonalMesh::Index> fine_vertex;
};

// Greedy breadth-first clustering of edge-neighbouring cells in index order.
// Each coarse cell keeps every fine vertex of its boundary cycle, so the
// boundary compatibility condition holds by construction. target_children = 1
// returns a copy of the input with identity maps.
Agglomerate agglomerate(const PolygonalMesh& mesh, int target_children);

// Nested levels, j = 1 (coarsest) .. J (finest). Accessors take the 1-based
// level index.
class MeshHierarchy {
 public:
  using Index = PolygonalMesh::Index;

  MeshHierarchy() = default;
  MeshHierarchy(std::vector<PolygonalMesh> levels,
                std::vector<std::vector<Index>> parents,
                std::vector<std::vector<Index>> coarse_nodes);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const PolygonalMesh& mesh(int j) const { return levels_.at(j - 1); }
  const PolygonalMesh& finest() const { return levels_.back(); }
  const PolygonalMesh& coarsest() const { return levels_.front(); }
  // For j >= 2: cell of level j -> parent cell of level j - 1.
  const std::vector<Index>& parents(int j) const { return parents_.at(j - 1); }
  // For j >= 2: vertex of level j - 1 -> identical vertex of level j.
  const std::vector<Index>& coarse_nodes(int j) const {
    return coarse_nodes_.at(j - 1);
  }
  // For j >= 2: the level-j cells of every level-(j-1) cell, ascending.
  std::vector<std::vector<Index>> children(int j) const;

  // Set by build_hierarchy when the coarsest candidate level had fewer than
  // four interior vertices and was discarded.
  int requested_levels = 0;
  bool stopped_early = false;

 private:
  std::vector<PolygonalMesh> levels_;
  std::vector<std::vector<Index>> parents_;       // [0] empty
  std::vector<std::vector<Index>> coarse_nodes_;  // [0] empty
};

MeshHierarchy build_hierarchy(const PolygonalMesh& fine, int levels,
                              int target_children);

// Per-step targets, finest step first; the last entry repeats when the list
// is shorter than levels - 1.
MeshHierarchy build_hierarchy(const PolygonalMesh& fine, int levels,
                              std::span<const int> target_children);

struct CompatibilityViolation {
  int level;  // fine level j of the (j-1, j) pair
  PolygonalMesh::Index coarse_cell;
  PolygonalMesh::Index fine_vertex;
};

struct CompatibilityReport {
  bool ok = true;
  std::vector<CompatibilityViolation> violations;
};

CompatibilityReport check_boundary_compatibility(const MeshHierarchy& h);

// level_<j>.txt in native format for every level plus parents.txt with lines
// "level child parent".
void write_hierarchy(const MeshHierarchy& h, const std::filesystem::path& dir);

}  // namespace vemg
