#include "vemg/simd.hpp"

namespace vemg::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby_scalar(const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void spmv_scalar(std::size_t rows, const std::int32_t* row_ptr,
                 const std::int32_t* cols, const double* vals, const double* x,
                 double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::int32_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

void residual_scalar(std::size_t rows, const std::int32_t* row_ptr,
                     const std::int32_t* cols, const double* vals,
                     const double* x, const double* b, double* r) {
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::int32_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      s += vals[k] * x[cols[k]];
    r[i] = b[i] - s;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, dot_scalar,  axpy_scalar,
                                 xpby_scalar, spmv_scalar, residual_scalar};
  return table;
}

}  // namespace vemg::simd
