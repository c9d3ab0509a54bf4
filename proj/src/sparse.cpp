#include "vemg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <string>

#include "vemg/error.hpp"
#include "vemg/simd.hpp"

namespace vemg {

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Index> row_ptr,
                           std::vector<Index> col_index,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_index_(std::move(col_index)),
      values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0)
    throw Error("SparseMatrix: negative dimension");
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 ||
      row_ptr_.front() != 0 ||
      static_cast<std::size_t>(row_ptr_.back()) != col_index_.size() ||
      col_index_.size() != values_.size())
    throw Error("SparseMatrix: inconsistent CSR arrays");
  for (Index i = 0; i < rows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i])
      throw Error("SparseMatrix: row pointers not monotone");
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_index_[k] < 0 || col_index_[k] >= cols_)
        throw Error("SparseMatrix: column index out of range in row " +
                    std::to_string(i));
      if (k > row_ptr_[i] && col_index_[k] <= col_index_[k - 1])
        throw Error("SparseMatrix: columns not sorted/unique in row " +
                    std::to_string(i));
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols,
                                         std::span<const Triplet> entries) {
  std::vector<Triplet> sorted(entries.begin(), entries.end());
  for (const Triplet& t : sorted)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw Error("SparseMatrix::from_triplets: entry out of range");
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  std::vector<Index> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_index;
  std::vector<double> values;
  col_index.reserve(sorted.size());
  values.reserve(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const Triplet& t = sorted[k];
    if (k > 0 && sorted[k - 1].row == t.row && sorted[k - 1].col == t.col) {
      values.back() += t.value;
      continue;
    }
    col_index.push_back(t.col);
    values.push_back(t.value);
    ++row_ptr[t.row + 1];
  }
  for (Index i = 0; i < rows; ++i) row_ptr[i + 1] += row_ptr[i];
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_index),
                      std::move(values));
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Index> row_ptr(n + 1), cols(n);
  for (Index i = 0; i <= n; ++i) row_ptr[i] = i;
  for (Index i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(row_ptr), std::move(cols),
                      std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense,
                                      double drop_below) {
  const auto rows = static_cast<Index>(dense.rows());
  const auto cols = static_cast<Index>(dense.cols());
  std::vector<Index> row_ptr{0}, col_index;
  std::vector<double> values;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (std::abs(dense(i, j)) > drop_below) {
        col_index.push_back(j);
        values.push_back(dense(i, j));
      }
    }
    row_ptr.push_back(static_cast<Index>(col_index.size()));
  }
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_index),
                      std::move(values));
}

double SparseMatrix::at(Index i, Index j) const {
  const auto first = col_index_.begin() + row_ptr_[i];
  const auto last = col_index_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_index_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x,
                            std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(cols_) ||
      y.size() != static_cast<std::size_t>(rows_))
    throw Error("SparseMatrix::multiply: dimension mismatch");
  simd::active().spmv(rows_, row_ptr_.data(), col_index_.data(),
                      values_.data(), x.data(), y.data());
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

void SparseMatrix::multiply_transpose(std::span<const double> x,
                                      std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(rows_) ||
      y.size() != static_cast<std::size_t>(cols_))
    throw Error("SparseMatrix::multiply_transpose: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (Index i = 0; i < rows_; ++i) {
    const double xi = x[i];
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      y[col_index_[k]] += values_[k] * xi;
  }
}

void SparseMatrix::residual(std::span<const double> b,
                            std::span<const double> x,
                            std::span<double> r) const {
  if (x.size() != static_cast<std::size_t>(cols_) ||
      b.size() != static_cast<std::size_t>(rows_) ||
      r.size() != static_cast<std::size_t>(rows_))
    throw Error("SparseMatrix::residual: dimension mismatch");
  simd::active().residual(rows_, row_ptr_.data(), col_index_.data(),
                          values_.data(), x.data(), b.data(), r.data());
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Index> row_ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (Index c : col_index_) ++row_ptr[c + 1];
  for (Index j = 0; j < cols_; ++j) row_ptr[j + 1] += row_ptr[j];
  std::vector<Index> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<Index> col_index(nnz());
  std::vector<double> values(nnz());
  // Rows visited in ascending order keep each transposed row sorted.
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index dst = next[col_index_[k]]++;
      col_index[dst] = i;
      values[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(row_ptr), std::move(col_index),
                      std::move(values));
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = at(i, i);
  return d;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::max_asymmetry() const {
  if (rows_ != cols_) throw Error("max_asymmetry: matrix not square");
  double m = 0.0;
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      m = std::max(m, std::abs(values_[k] - at(col_index_[k], i)));
  return m;
}

bool SparseMatrix::structurally_symmetric() const {
  if (rows_ != cols_) return false;
  const SparseMatrix t = transpose();
  return t.row_ptr_ == row_ptr_ && t.col_index_ == col_index_;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      d(i, col_index_[k]) = values_[k];
  return d;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  using Index = SparseMatrix::Index;
  if (a.cols() != b.rows()) throw Error("multiply: dimension mismatch");
  const auto arp = a.row_ptr();
  const auto aci = a.col_index();
  const auto av = a.values();
  const auto brp = b.row_ptr();
  const auto bci = b.col_index();
  const auto bv = b.values();

  std::vector<Index> row_ptr{0}, col_index;
  std::vector<double> values;
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<Index> marker(b.cols(), -1);
  std::vector<Index> touched;
  for (Index i = 0; i < a.rows(); ++i) {
    touched.clear();
    for (Index ka = arp[i]; ka < arp[i + 1]; ++ka) {
      const Index k = aci[ka];
      for (Index kb = brp[k]; kb < brp[k + 1]; ++kb) {
        const Index j = bci[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          touched.push_back(j);
        }
        acc[j] += av[ka] * bv[kb];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index j : touched) {
      col_index.push_back(j);
      values.push_back(acc[j]);
    }
    row_ptr.push_back(static_cast<Index>(col_index.size()));
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(row_ptr),
                      std::move(col_index), std::move(values));
}

SparseMatrix galerkin_product(const SparseMatrix& p, const SparseMatrix& a) {
  return multiply(p.transpose(), multiply(a, p));
}

SparseMatrix scaled(const SparseMatrix& a, double factor) {
  SparseMatrix out = a;
  for (double& v : out.values()) v *= factor;
  return out;
}

void write_matrix_market(const SparseMatrix& a,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  const auto rp = a.row_ptr();
  const auto ci = a.col_index();
  const auto v = a.values();
  for (SparseMatrix::Index i = 0; i < a.rows(); ++i)
    for (auto k = rp[i]; k < rp[i + 1]; ++k)
      out << i + 1 << ' ' << ci[k] + 1 << ' ' << v[k] << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace vemg
