#pragma once

#include <span>
#include <vector>

namespace vemg {

struct SolveReport {
  int iterations = 0;
  std::vector<double> residuals;  // ||r_0||, ..., ||r_N||
  double rho = 0.0;
  double wall_ms = 0.0;
  bool converged = false;
  std::vector<double> solution;
};

// exp((1/N) ln(||r_N|| / ||r_0||)) with N = history length - 1. A zero
// initial residual gives 0.
double convergence_factor(std::span<const double> residual_history);

}  // namespace vemg
