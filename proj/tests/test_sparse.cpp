#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "vemg/error.hpp"
#include "vemg/sparse.hpp"

using namespace vemg;

TEST_SUITE("sparse") {

TEST_CASE("triplets with duplicates are summed") {
  std::vector<Triplet> t{{0, 1, 1.0}, {1, 0, 2.0}, {0, 1, 0.5}, {1, 1, 3.0}};
  const auto a = SparseMatrix::from_triplets(2, 2, t);
  CHECK(a.nnz() == 3);
  CHECK(a.at(0, 1) == 1.5);
  CHECK(a.at(0, 0) == 0.0);
  CHECK(a.at(1, 0) == 2.0);
}

TEST_CASE("constructor rejects unsorted or out-of-range columns") {
  CHECK_THROWS_AS(SparseMatrix(1, 3, {0, 2}, {2, 1}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(SparseMatrix(1, 3, {0, 2}, {1, 1}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(SparseMatrix(1, 3, {0, 1}, {3}, {1.0}), Error);
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, std::vector<Triplet>{{2, 0, 1.0}}), Error);
}

TEST_CASE("products agree with dense arithmetic") {
  for (int trial = 0; trial < 20; ++trial) {
    const int m = testing::uniform_int(1, 15), n = testing::uniform_int(1, 15),
              k = testing::uniform_int(1, 15);
    const auto a = testing::random_sparse(m, n, 3);
    const auto b = testing::random_sparse(n, k, 3);
    const Eigen::MatrixXd ad = a.to_dense(), bd = b.to_dense();
    CHECK((multiply(a, b).to_dense() - ad * bd).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((a.transpose().to_dense() - ad.transpose()).cwiseAbs().maxCoeff() == 0.0);

    const auto x = testing::random_vector(n);
    const auto y = a.multiply(x);
    Eigen::VectorXd yd = ad * Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    for (int i = 0; i < m; ++i) CHECK(std::abs(y[i] - yd(i)) <= 1e-13);

    const auto z = testing::random_vector(m);
    std::vector<double> w(n);
    a.multiply_transpose(z, w);
    Eigen::VectorXd wd = ad.transpose() * Eigen::Map<const Eigen::VectorXd>(z.data(), m);
    for (int i = 0; i < n; ++i) CHECK(std::abs(w[i] - wd(i)) <= 1e-13);

    const auto p = testing::random_sparse(n, k, 2);
    const auto s = testing::random_spd(n, 3);
    const Eigen::MatrixXd pd = p.to_dense();
    CHECK((galerkin_product(p, s).to_dense() - pd.transpose() * s.to_dense() * pd)
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
}

TEST_CASE("residual, diagonal, symmetry helpers") {
  const auto s = testing::random_spd(30, 4);
  CHECK(s.max_asymmetry() == 0.0);
  CHECK(s.structurally_symmetric());
  const auto x = testing::random_vector(30);
  const auto b = testing::random_vector(30);
  std::vector<double> r(30);
  s.residual(b, x, r);
  const auto ax = s.multiply(x);
  for (int i = 0; i < 30; ++i) CHECK(r[i] == doctest::Approx(b[i] - ax[i]).epsilon(1e-14));
  const auto d = s.diagonal();
  for (int i = 0; i < 30; ++i) CHECK(d[i] == s.at(i, i));
  CHECK(scaled(s, 2.0).max_abs() == 2.0 * s.max_abs());

  const auto id = SparseMatrix::identity(4);
  CHECK(id.nnz() == 4);
  CHECK(id.multiply(std::vector<double>{1, 2, 3, 4}) == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("matrix market output is 1-based coordinate format") {
  std::vector<Triplet> t{{0, 0, 2.0}, {1, 0, -1.0}};
  const auto a = SparseMatrix::from_triplets(2, 3, t);
  const auto dir = testing::scratch_dir("mm");
  write_matrix_market(a, dir / "a.mtx");
  std::ifstream in(dir / "a.mtx");
  std::string header, dims;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
  std::getline(in, dims);
  CHECK(dims == "2 3 2");
  int i = 0, j = 0;
  double v = 0;
  in >> i >> j >> v;
  CHECK(i == 1);
  CHECK(j == 1);
  CHECK(v == 2.0);
}

}  // TEST_SUITE
