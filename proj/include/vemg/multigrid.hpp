#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "vemg/solve_report.hpp"
#include "vemg/sparse.hpp"
#include "vemg/transfer.hpp"

namespace vemg {

enum class SweepDirection { forward, backward };

// One in-place Gauss-Seidel sweep over the rows in ascending (forward) or
// descending (backward) order. Throws on a zero diagonal entry.
void gauss_seidel_sweep(const SparseMatrix& a, std::span<const double> b,
                        std::span<double> x, SweepDirection direction);

struct MGConfig {
  int cycle = 2;  // p: 1 = V-cycle, 2 = W-cycle; irrelevant with two levels
  int smoothing_steps = 2;
  double tolerance = 1e-8;
  int max_iterations = 200;
};

void validate(const MGConfig& config);

// Symmetric p-cycle over an operator ladder. Level 1 is solved exactly with a
// factorization computed at construction: dense Cholesky up to 2000 unknowns,
// sparse Cholesky above. Restriction is applied as P^T on the fly.
class MultigridSolver {
 public:
  MultigridSolver(std::vector<SparseMatrix> operators,
                  std::vector<SparseMatrix> prolongations, int smoothing_steps,
                  int cycle);
  MultigridSolver(const TransferSet& transfer, int smoothing_steps, int cycle);
  ~MultigridSolver();
  MultigridSolver(MultigridSolver&&) noexcept;
  MultigridSolver& operator=(MultigridSolver&&) noexcept;

  int num_levels() const { return static_cast<int>(operators_.size()); }
  const SparseMatrix& op(int j) const { return operators_.at(j - 1); }
  int smoothing_steps() const { return nu_; }
  int cycle() const { return p_; }

  // y = MG_p(j, g, x0, nu)
  std::vector<double> cycle(int j, std::span<const double> g,
                            std::span<const double> x0) const;

  // B g: one cycle on the finest level from a zero initial guess.
  std::vector<double> apply(std::span<const double> g) const;

  // Exact coarse solve A_1^{-1} g.
  std::vector<double> coarse_solve(std::span<const double> g) const;

 private:
  struct CoarseFactor;

  std::vector<SparseMatrix> operators_;
  std::vector<SparseMatrix> prolongations_;
  int nu_;
  int p_;
  std::unique_ptr<CoarseFactor> coarse_;
};

// Stationary iteration u <- u + B (b - A u) from u = 0, stopped on
// ||r_k|| <= tolerance ||r_0||. Non-convergence is reported, not thrown.
SolveReport mg_solve(const SparseMatrix& a, std::span<const double> b,
                     const MultigridSolver& mg, const MGConfig& config);

struct SpectralEstimate {
  double rho = 0.0;
  bool converged = false;
  int steps = 0;
};

// Power iteration in the energy norm on e -> e - B A e.
SpectralEstimate two_grid_spectral_radius(const SparseMatrix& a,
                                          const MultigridSolver& mg,
                                          std::uint64_t seed = 20240521,
                                          int steps = 200);

}  // namespace vemg
