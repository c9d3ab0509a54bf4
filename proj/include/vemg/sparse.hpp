#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace vemg {

struct Triplet {
  std::int32_t row;
  std::int32_t col;
  double value;
};

// Compressed-row sparse matrix. Column indices are sorted and unique within
// every row; the constructor enforces this.
class SparseMatrix {
 public:
  using Index = std::int32_t;

  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols, std::vector<Index> row_ptr,
               std::vector<Index> col_index, std::vector<double> values);

  // Duplicate (row, col) entries are summed. Explicit zeros are kept.
  static SparseMatrix from_triplets(Index rows, Index cols,
                                    std::span<const Triplet> entries);
  static SparseMatrix identity(Index n);
  static SparseMatrix from_dense(const Eigen::MatrixXd& dense,
                                 double drop_below = 0.0);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const Index> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_index() const { return col_index_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  // Entry (i, j); zero when not stored.
  double at(Index i, Index j) const;

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  // y = A^T x, without forming the transpose.
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  // r = b - A x
  void residual(std::span<const double> b, std::span<const double> x,
                std::span<double> r) const;

  SparseMatrix transpose() const;
  std::vector<double> diagonal() const;
  double max_abs() const;
  // max |A - A^T| over all entries.
  double max_asymmetry() const;
  // Sparsity pattern of A equals the pattern of A^T.
  bool structurally_symmetric() const;

  Eigen::MatrixXd to_dense() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_index_;
  std::vector<double> values_;
};

// C = A B
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

// P^T A P
SparseMatrix galerkin_product(const SparseMatrix& p, const SparseMatrix& a);

SparseMatrix scaled(const SparseMatrix& a, double factor);

// MatrixMarket coordinate real general, 1-based indices.
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path);

}  // namespace vemg
