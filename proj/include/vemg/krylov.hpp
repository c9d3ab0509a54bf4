#pragma once

#include <span>
#include <vector>

#include "vemg/solve_report.hpp"
#include "vemg/sparse.hpp"

namespace vemg {

struct KrylovOptions {
  double tolerance = 1e-8;  // relative residual
  int max_iterations = 10000;
};

SolveReport cg_solve(const SparseMatrix& a, std::span<const double> b,
                     const KrylovOptions& options = {});

// Incomplete Cholesky A ~ U^T U with dual threshold dropping. U is stored
// row-wise, diagonal first in each row.
struct IcFactor {
  SparseMatrix upper;
  double shift = 0.0;  // diagonal shift that was needed, 0 if none
};

// Entries below drop_tol * ||row of A||_2 are dropped and at most max_fill
// off-diagonal entries are kept per row of U. A non-positive pivot triggers a
// retry with diagonal shift 1e-3 * max diag, doubled up to three times.
IcFactor ic_factorize(const SparseMatrix& a, double drop_tol = 3e-2,
                      int max_fill = 10);

// z = (U^T U)^{-1} r
void ic_apply(const IcFactor& factor, std::span<const double> r,
              std::span<double> z);

SolveReport pcg_solve(const SparseMatrix& a, std::span<const double> b,
                      const IcFactor& factor, const KrylovOptions& options = {});

}  // namespace vemg
