#include "vemg/agglomeration.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "vemg/error.hpp"

namespace vemg {
namespace {

using Index = PolygonalMesh::Index;

// Boundary cycle of a set of cells, or nullopt when the union is not bounded
// by exactly one simple cycle (holes, pinched vertices).
std::optional<std::vector<Index>> trace_boundary(const PolygonalMesh& mesh,
                                                 std::span<const Index> members) {
  std::vector<std::pair<Index, Index>> directed;
  for (Index c : members) {
    const auto cell = mesh.cell(c);
    for (std::size_t i = 0; i < cell.size(); ++i)
      directed.emplace_back(cell[i], cell[(i + 1) % cell.size()]);
  }
  std::vector<std::pair<Index, Index>> sorted = directed;
  std::sort(sorted.begin(), sorted.end());

  std::unordered_map<Index, Index> next;
  std::optional<Index> start;
  std::size_t count = 0;
  for (const auto& [a, b] : directed) {
    if (std::binary_search(sorted.begin(), sorted.end(), std::pair{b, a}))
      continue;
    if (!next.emplace(a, b).second) return std::nullopt;
    if (!start) start = a;
    ++count;
  }
  if (!start) return std::nullopt;

  std::vector<Index> loop;
  Index v = *start;
  do {
    loop.push_back(v);
    auto it = next.find(v);
    if (it == next.end() || loop.size() > count) return std::nullopt;
    v = it->second;
  } while (v != *start);
  if (loop.size() != count) return std::nullopt;
  return loop;
}

void require_connected(const std::vector<std::vector<Index>>& nbrs) {
  if (nbrs.empty()) throw Error("agglomerate: empty mesh");
  std::vector<bool> seen(nbrs.size(), false);
  std::deque<Index> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const Index c = queue.front();
    queue.pop_front();
    for (Index n : nbrs[c])
      if (!seen[n]) {
        seen[n] = true;
        ++reached;
        queue.push_back(n);
      }
  }
  if (reached != nbrs.size())
    throw Error("agglomerate: disconnected input mesh (cell " +
                std::to_string(std::find(seen.begin(), seen.end(), false) -
                               seen.begin()) +
                " unreachable from cell 0)");
}

}  // namespace

Agglomerate agglomerate(const PolygonalMesh& mesh, int target_children) {
  if (target_children < 1)
    throw Error("agglomerate: target_children must be >= 1");
  const auto nbrs = mesh.cell_neighbors();
  require_connected(nbrs);
  const std::size_t n = mesh.num_cells();

  if (target_children == 1) {
    Agglomerate out{mesh, {}, {}};
    out.parent.resize(n);
    for (std::size_t c = 0; c < n; ++c) out.parent[c] = static_cast<Index>(c);
    out.fine_vertex.resize(mesh.num_vertices());
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
      out.fine_vertex[v] = static_cast<Index>(v);
    return out;
  }

  const std::size_t target = static_cast<std::size_t>(target_children);
  std::vector<Index> owner(n, -1);
  std::vector<std::vector<Index>> clusters;

  // Seeded breadth-first growth.
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (owner[seed] >= 0) continue;
    const auto id = static_cast<Index>(clusters.size());
    std::vector<Index> members{static_cast<Index>(seed)};
    owner[seed] = id;
    std::deque<Index> queue{static_cast<Index>(seed)};
    while (!queue.empty() && members.size() < target) {
      const Index u = queue.front();
      queue.pop_front();
      for (Index w : nbrs[u]) {
        if (members.size() >= target) break;
        if (owner[w] >= 0) continue;
        owner[w] = id;
        members.push_back(w);
        queue.push_back(w);
      }
    }
    clusters.push_back(std::move(members));
  }

  // Clusters that are not bounded by one simple cycle fall back to singletons.
  const std::size_t grown = clusters.size();
  for (std::size_t k = 0; k < grown; ++k) {
    if (clusters[k].size() < 2) continue;
    std::sort(clusters[k].begin(), clusters[k].end());
    if (trace_boundary(mesh, clusters[k])) continue;
    std::vector<Index> members = std::move(clusters[k]);
    clusters[k] = {members.front()};
    for (std::size_t i = 1; i < members.size(); ++i) {
      owner[members[i]] = static_cast<Index>(clusters.size());
      clusters.push_back({members[i]});
    }
  }

  // Absorb singletons into the smallest neighbouring cluster that stays
  // simply connected; ties go to the lowest cluster index.
  for (std::size_t c = 0; c < n; ++c) {
    const Index id = owner[c];
    if (clusters[id].size() != 1) continue;
    std::vector<std::pair<std::size_t, Index>> candidates;
    for (Index w : nbrs[c]) {
      const Index other = owner[w];
      if (other == id || clusters[other].size() >= 2 * target) continue;
      candidates.emplace_back(clusters[other].size(), other);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());
    for (const auto& [size, other] : candidates) {
      std::vector<Index> merged = clusters[other];
      merged.insert(std::lower_bound(merged.begin(), merged.end(),
                                     static_cast<Index>(c)),
                    static_cast<Index>(c));
      if (!trace_boundary(mesh, merged)) continue;
      clusters[other] = std::move(merged);
      clusters[id].clear();
      owner[c] = other;
      break;
    }
  }

  // Compact cluster ids in order of first appearance by fine cell index.
  std::vector<Index> renumber(clusters.size(), -1);
  Index next_id = 0;
  std::vector<Index> parent(n);
  for (std::size_t c = 0; c < n; ++c) {
    Index& r = renumber[owner[c]];
    if (r < 0) r = next_id++;
    parent[c] = r;
  }
  std::vector<std::vector<Index>> members(next_id);
  for (std::size_t c = 0; c < n; ++c)
    members[parent[c]].push_back(static_cast<Index>(c));

  std::vector<std::vector<Index>> loops(next_id);
  std::vector<bool> used(mesh.num_vertices(), false);
  for (Index k = 0; k < next_id; ++k) {
    auto loop = trace_boundary(mesh, members[k]);
    if (!loop)
      throw Error("agglomerate: agglomerate containing fine cell " +
                  std::to_string(members[k].front()) +
                  " is not bounded by a single simple cycle");
    for (Index v : *loop) used[v] = true;
    loops[k] = std::move(*loop);
  }

  std::vector<Index> coarse_of(mesh.num_vertices(), -1);
  std::vector<Index> fine_vertex;
  std::vector<Point> vertices;
  std::vector<bool> boundary;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (!used[v]) continue;
    coarse_of[v] = static_cast<Index>(fine_vertex.size());
    fine_vertex.push_back(static_cast<Index>(v));
    vertices.push_back(mesh.vertex(static_cast<Index>(v)));
    boundary.push_back(mesh.is_boundary(static_cast<Index>(v)));
  }
  for (auto& loop : loops)
    for (Index& v : loop) v = coarse_of[v];

  PolygonalMesh coarse(std::move(vertices), std::move(loops),
                       std::move(boundary), mesh.level_tag() - 1);
  return {std::move(coarse), std::move(parent), std::move(fine_vertex)};
}

MeshHierarchy::MeshHierarchy(std::vector<PolygonalMesh> levels,
                             std::vector<std::vector<Index>> parents,
                             std::vector<std::vector<Index>> coarse_nodes)
    : levels_(std::move(levels)),
      parents_(std::move(parents)),
      coarse_nodes_(std::move(coarse_nodes)) {
  if (levels_.empty()) throw Error("hierarchy needs at least one level");
  if (parents_.size() != levels_.size() || coarse_nodes_.size() != levels_.size())
    throw Error("hierarchy: map count does not match level count");
  for (std::size_t j = 1; j < levels_.size(); ++j) {
    const auto& fine = levels_[j];
    const auto& coarse = levels_[j - 1];
    if (parents_[j].size() != fine.num_cells())
      throw Error("hierarchy: parent map size mismatch at level " +
                  std::to_string(j + 1));
    std::vector<bool> hit(coarse.num_cells(), false);
    for (Index p : parents_[j]) {
      if (p < 0 || static_cast<std::size_t>(p) >= coarse.num_cells())
        throw Error("hierarchy: parent index out of range");
      hit[p] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end())
      throw Error("hierarchy: parent map not surjective at level " +
                  std::to_string(j + 1));
    if (coarse_nodes_[j].size() != coarse.num_vertices())
      throw Error("hierarchy: coarse node map size mismatch");
    for (std::size_t v = 0; v < coarse.num_vertices(); ++v) {
      const Index f = coarse_nodes_[j][v];
      if (f < 0 || static_cast<std::size_t>(f) >= fine.num_vertices() ||
          !(fine.vertex(f) == coarse.vertex(static_cast<Index>(v))))
        throw Error("hierarchy: coarse vertex " + std::to_string(v) +
                    " has no identical fine vertex");
    }
  }
}

std::vector<std::vector<PolygonalMesh::Index>> MeshHierarchy::children(
    int j) const {
  std::vector<std::vector<Index>> out(mesh(j - 1).num_cells());
  const auto& p = parents(j);
  for (std::size_t c = 0; c < p.size(); ++c)
    out[p[c]].push_back(static_cast<Index>(c));
  return out;
}

MeshHierarchy build_hierarchy(const PolygonalMesh& fine, int levels,
                              int target_children) {
  const int targets[] = {target_children};
  return build_hierarchy(fine, levels, targets);
}

MeshHierarchy build_hierarchy(const PolygonalMesh& fine, int levels,
                              std::span<const int> target_children) {
  if (levels < 2) throw Error("build_hierarchy: need at least 2 levels");
  if (target_children.empty())
    throw Error("build_hierarchy: empty agglomeration target list");
  std::vector<PolygonalMesh> meshes{fine};
  std::vector<std::vector<Index>> parents{{}};
  std::vector<std::vector<Index>> nodes{{}};
  bool stopped = false;
  for (int step = 1; step < levels; ++step) {
    const std::size_t k =
        std::min<std::size_t>(step - 1, target_children.size() - 1);
    Agglomerate a = agglomerate(meshes.back(), target_children[k]);
    if (a.coarse.num_interior_vertices() < 4) {
      stopped = true;
      break;
    }
    parents.push_back(std::move(a.parent));
    nodes.push_back(std::move(a.fine_vertex));
    meshes.push_back(std::move(a.coarse));
  }
  // Stored coarse-to-fine; the maps belong to the finer level of each pair.
  std::reverse(meshes.begin(), meshes.end());
  std::vector<std::vector<Index>> p_out(meshes.size()), n_out(meshes.size());
  for (std::size_t k = 1; k < parents.size(); ++k) {
    const std::size_t j = meshes.size() - k;
    p_out[j] = std::move(parents[k]);
    n_out[j] = std::move(nodes[k]);
  }
  const int depth = static_cast<int>(meshes.size());
  for (int j = 0; j < depth; ++j) {
    // level tags follow the 1-based level index
    auto& m = meshes[j];
    m = PolygonalMesh(m.vertices(), m.cells(), m.boundary_vertex(), j + 1);
  }
  MeshHierarchy h(std::move(meshes), std::move(p_out), std::move(n_out));
  h.requested_levels = levels;
  h.stopped_early = stopped;
  return h;
}

CompatibilityReport check_boundary_compatibility(const MeshHierarchy& h) {
  CompatibilityReport report;
  for (int j = 2; j <= h.num_levels(); ++j) {
    const auto& coarse = h.mesh(j - 1);
    const auto& fine = h.mesh(j);
    const auto& nodes = h.coarse_nodes(j);
    const auto kids = h.children(j);
    for (std::size_t e = 0; e < coarse.num_cells(); ++e) {
      const auto ccell = coarse.cell(static_cast<Index>(e));
      std::set<Index> own;
      for (Index v : ccell) own.insert(nodes[v]);
      std::set<Index> offending;
      for (Index child : kids[e]) {
        for (Index v : fine.cell(child)) {
          if (own.count(v)) continue;
          const Point& p = fine.vertex(v);
          for (std::size_t i = 0; i < ccell.size(); ++i) {
            const Point& a = coarse.vertex(ccell[i]);
            const Point& b = coarse.vertex(ccell[(i + 1) % ccell.size()]);
            const double len2 =
                (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
            const double cr = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            const double t =
                ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2;
            if (std::abs(cr) <= 1e-12 * len2 && t > 0.0 && t < 1.0) {
              offending.insert(v);
              break;
            }
          }
        }
      }
      for (Index v : offending)
        report.violations.push_back({j, static_cast<Index>(e), v});
    }
  }
  report.ok = report.violations.empty();
  return report;
}

void write_hierarchy(const MeshHierarchy& h, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (int j = 1; j <= h.num_levels(); ++j)
    write_native(h.mesh(j), dir / ("level_" + std::to_string(j) + ".txt"));
  std::ofstream out(dir / "parents.txt");
  if (!out) throw Error("cannot write parents.txt in " + dir.string());
  for (int j = 2; j <= h.num_levels(); ++j) {
    const auto& p = h.parents(j);
    for (std::size_t c = 0; c < p.size(); ++c)
      out << j << ' ' << c << ' ' << p[c] << '\n';
  }
}

}  // namespace vemg
