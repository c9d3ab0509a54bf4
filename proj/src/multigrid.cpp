#include "vemg/multigrid.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vemg/error.hpp"
#include "vemg/simd.hpp"

namespace vemg {

using Index = SparseMatrix::Index;

namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(simd::active().dot(v.data(), v.data(), v.size()));
}

constexpr Index kDenseCoarseLimit = 2000;

}  // namespace

double convergence_factor(std::span<const double> history) {
  if (history.size() < 2) throw Error("convergence_factor: need at least 2 residuals");
  if (history.front() == 0.0) return 0.0;
  const double n = static_cast<double>(history.size() - 1);
  return std::exp(std::log(history.back() / history.front()) / n);
}

void gauss_seidel_sweep(const SparseMatrix& a, std::span<const double> b,
                        std::span<double> x, SweepDirection direction) {
  const Index n = a.rows();
  if (a.cols() != n || b.size() != static_cast<std::size_t>(n) ||
      x.size() != static_cast<std::size_t>(n))
    throw Error("gauss_seidel_sweep: dimension mismatch");
  const auto rp = a.row_ptr();
  const auto ci = a.col_index();
  const auto v = a.values();
  auto relax = [&](Index i) {
    double s = b[i];
    double diag = 0.0;
    for (Index k = rp[i]; k < rp[i + 1]; ++k) {
      if (ci[k] == i) {
        diag = v[k];
      } else {
        s -= v[k] * x[ci[k]];
      }
    }
    if (diag == 0.0)
      throw Error("gauss_seidel_sweep: zero diagonal in row " + std::to_string(i));
    x[i] = s / diag;
  };
  if (direction == SweepDirection::forward) {
    for (Index i = 0; i < n; ++i) relax(i);
  } else {
    for (Index i = n - 1; i >= 0; --i) relax(i);
  }
}

void validate(const MGConfig& config) {
  if (config.cycle != 1 && config.cycle != 2)
    throw Error("MGConfig: cycle must be 1 (V) or 2 (W)");
  if (config.smoothing_steps < 1) throw Error("MGConfig: smoothing steps must be >= 1");
  if (!(config.tolerance > 0.0)) throw Error("MGConfig: tolerance must be positive");
  if (config.max_iterations < 1) throw Error("MGConfig: max iterations must be >= 1");
}

struct MultigridSolver::CoarseFactor {
  Eigen::LLT<Eigen::MatrixXd> dense;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> sparse;
  bool use_dense = true;
};

MultigridSolver::MultigridSolver(std::vector<SparseMatrix> operators,
                                 std::vector<SparseMatrix> prolongations,
                                 int smoothing_steps, int cycle)
    : operators_(std::move(operators)),
      prolongations_(std::move(prolongations)),
      nu_(smoothing_steps),
      p_(cycle),
      coarse_(std::make_unique<CoarseFactor>()) {
  if (operators_.empty()) throw Error("MultigridSolver: no levels");
  if (prolongations_.size() != operators_.size())
    throw Error("MultigridSolver: need one prolongation slot per level");
  if (nu_ < 1) throw Error("MultigridSolver: smoothing steps must be >= 1");
  if (p_ < 1) throw Error("MultigridSolver: cycle index must be >= 1");

  const SparseMatrix& a1 = operators_.front();
  if (a1.rows() <= kDenseCoarseLimit) {
    coarse_->dense.compute(a1.to_dense());
    if (coarse_->dense.info() != Eigen::Success)
      throw Error("MultigridSolver: coarse operator is not positive definite");
  } else {
    coarse_->use_dense = false;
    std::vector<Eigen::Triplet<double>> t;
    const auto rp = a1.row_ptr();
    const auto ci = a1.col_index();
    const auto v = a1.values();
    for (Index i = 0; i < a1.rows(); ++i)
      for (Index k = rp[i]; k < rp[i + 1]; ++k) t.emplace_back(i, ci[k], v[k]);
    Eigen::SparseMatrix<double> s(a1.rows(), a1.cols());
    s.setFromTriplets(t.begin(), t.end());
    coarse_->sparse.compute(s);
    if (coarse_->sparse.info() != Eigen::Success)
      throw Error("MultigridSolver: coarse operator is not positive definite");
  }
}

MultigridSolver::MultigridSolver(const TransferSet& transfer, int smoothing_steps,
                                 int cycle)
    : MultigridSolver(transfer.operators(), transfer.prolongations(),
                      smoothing_steps, cycle) {}

MultigridSolver::~MultigridSolver() = default;
MultigridSolver::MultigridSolver(MultigridSolver&&) noexcept = default;
MultigridSolver& MultigridSolver::operator=(MultigridSolver&&) noexcept = default;

std::vector<double> MultigridSolver::coarse_solve(std::span<const double> g) const {
  const Eigen::Map<const Eigen::VectorXd> rhs(g.data(),
                                              static_cast<Eigen::Index>(g.size()));
  Eigen::VectorXd y = coarse_->use_dense ? Eigen::VectorXd(coarse_->dense.solve(rhs))
                                         : Eigen::VectorXd(coarse_->sparse.solve(rhs));
  return {y.data(), y.data() + y.size()};
}

std::vector<double> MultigridSolver::cycle(int j, std::span<const double> g,
                                           std::span<const double> x0) const {
  if (j < 1 || j > num_levels())
    throw Error("MultigridSolver::cycle: level out of range");
  if (j == 1) return coarse_solve(g);

  const SparseMatrix& a = operators_[j - 1];
  const SparseMatrix& p = prolongations_[j - 1];
  // R^{(l+nu)}: R (forward) for odd l+nu, R^T (backward) for even.
  auto smooth = [&](std::vector<double>& x, int l) {
    gauss_seidel_sweep(a, g, x,
                       (l + nu_) % 2 == 1 ? SweepDirection::forward
                                          : SweepDirection::backward);
  };

  std::vector<double> x(x0.begin(), x0.end());
  for (int l = 1; l <= nu_; ++l) smooth(x, l);

  std::vector<double> r(x.size());
  a.residual(g, x, r);
  std::vector<double> rc(static_cast<std::size_t>(p.cols()));
  p.multiply_transpose(r, rc);

  std::vector<double> q(rc.size(), 0.0);
  for (int i = 1; i <= p_; ++i) q = cycle(j - 1, rc, q);

  std::vector<double> correction(x.size());
  p.multiply(q, correction);
  simd::active().axpy(1.0, correction.data(), x.data(), x.size());

  for (int l = nu_ + 1; l <= 2 * nu_; ++l) smooth(x, l);
  return x;
}

std::vector<double> MultigridSolver::apply(std::span<const double> g) const {
  const std::vector<double> zero(g.size(), 0.0);
  return cycle(num_levels(), g, zero);
}

SolveReport mg_solve(const SparseMatrix& a, std::span<const double> b,
                     const MultigridSolver& mg, const MGConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const auto& k = simd::active();
  SolveReport report;
  const std::size_t n = b.size();
  std::vector<double> u(n, 0.0), r(b.begin(), b.end());
  const double r0 = norm2(r);
  report.residuals.push_back(r0);
  if (r0 == 0.0) {
    report.converged = true;
  } else {
    for (int it = 0; it < config.max_iterations; ++it) {
      const std::vector<double> c = mg.apply(r);
      k.axpy(1.0, c.data(), u.data(), n);
      a.residual(b, u, r);
      const double rn = norm2(r);
      report.residuals.push_back(rn);
      report.iterations = it + 1;
      if (rn <= config.tolerance * r0) {
        report.converged = true;
        break;
      }
    }
  }
  report.rho = report.residuals.size() < 2 ? 0.0 : convergence_factor(report.residuals);
  report.solution = std::move(u);
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

SpectralEstimate two_grid_spectral_radius(const SparseMatrix& a,
                                          const MultigridSolver& mg,
                                          std::uint64_t seed, int steps) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  const auto& k = simd::active();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> e(n), ae(n), w(n);
  for (double& x : e) x = dist(rng);

  auto energy = [&](const std::vector<double>& v, std::vector<double>& av) {
    a.multiply(v, av);
    return std::sqrt(std::max(0.0, k.dot(v.data(), av.data(), n)));
  };

  SpectralEstimate est;
  double norm = energy(e, ae);
  double previous = -1.0;
  for (int s = 0; s < steps; ++s) {
    const std::vector<double> c = mg.apply(ae);
    for (std::size_t i = 0; i < n; ++i) w[i] = e[i] - c[i];
    const double wn = energy(w, ae);
    est.rho = norm > 0.0 ? wn / norm : 0.0;
    est.steps = s + 1;
    if (wn == 0.0) {
      est.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = w[i] / wn;
      ae[i] /= wn;
    }
    norm = 1.0;
    est.converged = previous >= 0.0 && std::abs(est.rho - previous) <= 1e-6 * est.rho;
    previous = est.rho;
  }
  return est;
}

}  // namespace vemg
