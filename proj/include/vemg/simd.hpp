#pragma once

// Vector and CSR kernels used by the iterative solvers.
//
// Every kernel has a scalar reference implementation. An AVX2/FMA variant is
// compiled into its own translation unit and selected at runtime when the CPU
// supports it. Set VEMG_KERNELS=scalar in the environment to force the
// reference path.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace vemg::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = x + beta * y
  void (*xpby)(const double* x, double beta, double* y, std::size_t n);
  // y = A x, A in CSR
  void (*spmv)(std::size_t rows, const std::int32_t* row_ptr,
               const std::int32_t* cols, const double* vals, const double* x,
               double* y);
  // r = b - A x
  void (*residual)(std::size_t rows, const std::int32_t* row_ptr,
                   const std::int32_t* cols, const double* vals,
                   const double* x, const double* b, double* r);
};

const KernelTable& scalar_kernels();

// Returns nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_has_avx2();

// The table picked once per process: AVX2 when available and not overridden.
const KernelTable& active();

std::string_view isa_name(Isa isa);

}  // namespace vemg::simd
