#pragma once

// Small helpers shared by the unit tests: deterministic random generators
// and a few hand-built meshes.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vemg/mesh.hpp"
#include "vemg/sparse.hpp"

namespace testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(12345);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline int uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng());
}

inline std::vector<double> random_vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(lo, hi);
  return v;
}

// Random sparse matrix with roughly `per_row` entries per row.
inline vemg::SparseMatrix random_sparse(int rows, int cols, int per_row) {
  std::vector<vemg::Triplet> t;
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < per_row; ++k)
      t.push_back({i, uniform_int(0, cols - 1), uniform(-1.0, 1.0)});
  return vemg::SparseMatrix::from_triplets(rows, cols, t);
}

// Symmetric, strictly diagonally dominant, positive diagonal: SPD.
inline vemg::SparseMatrix random_spd(int n, int per_row) {
  std::vector<vemg::Triplet> t;
  std::vector<double> rowsum(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < per_row; ++k) {
      const int j = uniform_int(0, n - 1);
      if (j == i) continue;
      const double v = uniform(-1.0, 0.0);
      t.push_back({i, j, v});
      t.push_back({j, i, v});
      rowsum[i] += -v;
      rowsum[j] += -v;
    }
  for (int i = 0; i < n; ++i) t.push_back({i, i, rowsum[i] + uniform(0.1, 1.0)});
  return vemg::SparseMatrix::from_triplets(n, n, t);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double norm2(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

// Unit square split into two triangles along (0,0)-(1,1).
inline vemg::PolygonalMesh two_triangles() {
  return vemg::PolygonalMesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}},
                             {true, true, true, true});
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("vemg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
