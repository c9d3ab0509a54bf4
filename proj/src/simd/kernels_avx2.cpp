// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has checked cpu_has_avx2().

#include <immintrin.h>

#include "vemg/simd.hpp"

namespace vemg::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4),
                           acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), yv));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby_avx2(const double* x, double beta, double* y, std::size_t n) {
  const __m256d b = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(b, yv, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

// Row dot product with gathered x entries.
inline double row_dot(std::int32_t begin, std::int32_t end,
                      const std::int32_t* cols, const double* vals,
                      const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::int32_t k = begin;
  for (; k + 4 <= end; k += 4) {
    __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
    __m256d xv = _mm256_i32gather_pd(x, idx, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xv, acc);
  }
  double s = hsum(acc);
  for (; k < end; ++k) s += vals[k] * x[cols[k]];
  return s;
}

void spmv_avx2(std::size_t rows, const std::int32_t* row_ptr,
               const std::int32_t* cols, const double* vals, const double* x,
               double* y) {
  for (std::size_t i = 0; i < rows; ++i)
    y[i] = row_dot(row_ptr[i], row_ptr[i + 1], cols, vals, x);
}

void residual_avx2(std::size_t rows, const std::int32_t* row_ptr,
                   const std::int32_t* cols, const double* vals,
                   const double* x, const double* b, double* r) {
  for (std::size_t i = 0; i < rows; ++i)
    r[i] = b[i] - row_dot(row_ptr[i], row_ptr[i + 1], cols, vals, x);
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{Isa::avx2, dot_avx2,  axpy_avx2,
                                 xpby_avx2, spmv_avx2, residual_avx2};
  return &table;
}

}  // namespace vemg::simd
