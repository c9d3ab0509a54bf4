#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "vemg/agglomeration.hpp"
#include "vemg/error.hpp"
#include "vemg/transfer.hpp"
#include "vemg/vem.hpp"

using namespace vemg;
using Index = PolygonalMesh::Index;

namespace {

MeshHierarchy hierarchy(int n, int levels) {
  const std::vector<int> targets{9, 2};
  return build_hierarchy(generate_structured_triangle_mesh(n), levels, targets);
}

std::vector<double> sample(const PolygonalMesh& m, double a, double b, double c) {
  std::vector<double> v(m.num_vertices());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& p = m.vertex(static_cast<Index>(i));
    v[i] = a + b * p.x + c * p.y;
  }
  return v;
}

double relative_diff(const SparseMatrix& x, const SparseMatrix& y) {
  return (x.to_dense() - y.to_dense()).cwiseAbs().maxCoeff() / y.max_abs();
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("constants and linears are reproduced over all vertices") {
  for (int n : {6, 11, 16}) {
    const auto h = hierarchy(n, 4);
    for (int j = 2; j <= h.num_levels(); ++j) {
      const auto p = prolongation_matrix(h, j, ProlongationRows::all_vertices);
      const auto ones = p.multiply(std::vector<double>(p.cols(), 1.0));
      for (double v : ones) CHECK(std::abs(v - 1.0) <= 1e-12);

      for (int trial = 0; trial < 5; ++trial) {
        const double a = testing::uniform(-1, 1), b = testing::uniform(-3, 3),
                     c = testing::uniform(-3, 3);
        const auto fine = p.multiply(sample(h.mesh(j - 1), a, b, c));
        CHECK(testing::max_abs_diff(fine, sample(h.mesh(j), a, b, c)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("interior prolongation is the interior block of the full one") {
  const auto h = hierarchy(12, 3);
  for (int j = 2; j <= 3; ++j) {
    const auto full = prolongation_matrix(h, j, ProlongationRows::all_vertices).to_dense();
    const auto p = prolongation_matrix(h, j).to_dense();
    const auto fd = make_dof_map(h.mesh(j));
    const auto cd = make_dof_map(h.mesh(j - 1));
    REQUIRE(p.rows() == static_cast<Eigen::Index>(fd.size()));
    REQUIRE(p.cols() == static_cast<Eigen::Index>(cd.size()));
    for (std::size_t r = 0; r < fd.size(); ++r)
      for (std::size_t c = 0; c < cd.size(); ++c)
        CHECK(p(r, c) == full(fd.vertex_of_dof[r], cd.vertex_of_dof[c]));
  }
}

TEST_CASE("row partition: copy rows and polynomial rows recounted from the hierarchy") {
  const auto h = hierarchy(16, 3);
  for (int j = 2; j <= 3; ++j) {
    const auto& fine = h.mesh(j);
    const auto& coarse = h.mesh(j - 1);
    const auto p = prolongation_matrix(h, j);
    const auto fd = make_dof_map(fine);
    const auto cd = make_dof_map(coarse);

    std::vector<Index> coarse_of(fine.num_vertices(), -1);
    for (std::size_t v = 0; v < h.coarse_nodes(j).size(); ++v)
      coarse_of[h.coarse_nodes(j)[v]] = static_cast<Index>(v);

    // node sets from the hierarchy: fine vertices of each agglomerate's
    // children that are not coarse vertices
    std::vector<int> owners(fine.num_vertices(), 0);
    std::vector<Index> owner_cell(fine.num_vertices(), -1);
    const auto kids = h.children(j);
    for (std::size_t e = 0; e < kids.size(); ++e) {
      std::vector<Index> inside;
      for (Index child : kids[e])
        for (Index v : fine.cell(child))
          if (coarse_of[v] < 0) inside.push_back(v);
      std::sort(inside.begin(), inside.end());
      inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
      for (Index v : inside) {
        ++owners[v];
        owner_cell[v] = static_cast<Index>(e);
      }
    }

    std::size_t copy_rows = 0, poly_rows = 0;
    for (std::size_t r = 0; r < fd.size(); ++r) {
      const Index v = fd.vertex_of_dof[r];
      const auto begin = p.row_ptr()[r], end = p.row_ptr()[r + 1];
      if (coarse_of[v] >= 0) {
        CHECK(owners[v] == 0);
        REQUIRE(end - begin == 1);
        CHECK(p.col_index()[begin] == cd.dof_of_vertex[coarse_of[v]]);
        CHECK(p.values()[begin] == 1.0);
        ++copy_rows;
      } else {
        CHECK(owners[v] == 1);
        std::size_t interior_coarse = 0;
        for (Index cv : coarse.cell(owner_cell[v])) interior_coarse += !coarse.is_boundary(cv);
        CHECK(static_cast<std::size_t>(end - begin) == interior_coarse);
        ++poly_rows;
      }
    }
    CHECK(copy_rows == cd.size());
    CHECK(copy_rows + poly_rows == fd.size());
  }
}

TEST_CASE("inherited operators satisfy the Galerkin identity at every level") {
  const auto h = hierarchy(16, 4);
  const auto sys = assemble_system(h.finest(), 1.0, [](const Point&) { return 1.0; });
  const auto t = coarse_operators(sys.A, h, 1.0, CoarseMode::inherited);
  REQUIRE(t.num_levels() == 4);
  CHECK(t.op(4).to_dense() == sys.A.to_dense());
  for (int j = 4; j >= 2; --j) {
    const auto& p = t.prolongation(j);
    const Eigen::MatrixXd pd = p.to_dense();
    const Eigen::MatrixXd ref = pd.transpose() * t.op(j).to_dense() * pd;
    CHECK((t.op(j - 1).to_dense() - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
    CHECK(t.op(j - 1).max_asymmetry() <= 1e-13 * t.op(j - 1).max_abs());
  }
}

TEST_CASE("non-inherited on identical levels reproduces the fine matrix") {
  const auto fine = generate_structured_triangle_mesh(5);
  const auto h = build_hierarchy(fine, 2, 1);
  const auto sys = assemble_system(fine, 2.5, [](const Point&) { return 1.0; });
  const auto t = coarse_operators(sys.A, h, 2.5, CoarseMode::non_inherited);
  CHECK(relative_diff(t.op(1), sys.A) <= 1e-15);
  const auto ti = coarse_operators(sys.A, h, 2.5, CoarseMode::inherited);
  CHECK(relative_diff(ti.op(1), sys.A) <= 1e-15);
}

TEST_CASE("coarse operators are SPD in both modes on n = 8") {
  const auto h = hierarchy(8, 3);
  const auto sys = assemble_system(h.finest(), 1.0, [](const Point&) { return 1.0; });
  for (auto mode : {CoarseMode::inherited, CoarseMode::non_inherited}) {
    const auto t = coarse_operators(sys.A, h, 1.0, mode);
    CHECK(t.mode() == mode);
    for (int j = 1; j < t.num_levels(); ++j) {
      CHECK(t.op(j).max_asymmetry() <= 1e-13 * t.op(j).max_abs());
      Eigen::LLT<Eigen::MatrixXd> llt(t.op(j).to_dense());
      CHECK(llt.info() == Eigen::Success);
    }
  }
}

TEST_CASE("mode names and level range") {
  CHECK(parse_coarse_mode("inherited") == CoarseMode::inherited);
  CHECK(parse_coarse_mode("noninherited") == CoarseMode::non_inherited);
  CHECK(to_string(CoarseMode::non_inherited) == "noninherited");
  CHECK_THROWS_AS(parse_coarse_mode("galerkin"), Error);
  const auto h = hierarchy(8, 2);
  CHECK_THROWS_AS(prolongation_matrix(h, 1), Error);
  CHECK_THROWS_AS(prolongation_matrix(h, 3), Error);
}

}  // TEST_SUITE
