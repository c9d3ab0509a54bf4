#include "vemg/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "vemg/error.hpp"
#include "vemg/simd.hpp"

namespace vemg {

using Index = SparseMatrix::Index;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Shared CG/PCG loop; precondition == nullptr means z = r.
SolveReport conjugate_gradient(const SparseMatrix& a, std::span<const double> b,
                               const IcFactor* precondition,
                               const KrylovOptions& options) {
  const auto start = Clock::now();
  const auto& k = simd::active();
  const std::size_t n = b.size();
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != n)
    throw Error("conjugate gradient: dimension mismatch");

  SolveReport report;
  std::vector<double> x(n, 0.0), r(b.begin(), b.end()), z(n), p(n), ap(n);
  const double r0 = std::sqrt(k.dot(r.data(), r.data(), n));
  report.residuals.push_back(r0);
  if (r0 == 0.0) {
    report.converged = true;
  } else {
    if (precondition) {
      ic_apply(*precondition, r, z);
    } else {
      z = r;
    }
    p = z;
    double rz = k.dot(r.data(), z.data(), n);
    for (int it = 0; it < options.max_iterations; ++it) {
      a.multiply(p, ap);
      const double pap = k.dot(p.data(), ap.data(), n);
      if (!(pap > 0.0)) throw Error("conjugate gradient: matrix not positive definite");
      const double alpha = rz / pap;
      k.axpy(alpha, p.data(), x.data(), n);
      k.axpy(-alpha, ap.data(), r.data(), n);
      const double rn = std::sqrt(k.dot(r.data(), r.data(), n));
      report.residuals.push_back(rn);
      report.iterations = it + 1;
      if (rn <= options.tolerance * r0) {
        report.converged = true;
        break;
      }
      if (precondition) {
        ic_apply(*precondition, r, z);
      } else {
        z = r;
      }
      const double rz_next = k.dot(r.data(), z.data(), n);
      k.xpby(z.data(), rz_next / rz, p.data(), n);
      rz = rz_next;
    }
  }
  report.rho = report.residuals.size() < 2 ? 0.0 : convergence_factor(report.residuals);
  report.solution = std::move(x);
  report.wall_ms = elapsed_ms(start);
  return report;
}

struct Breakdown {
  Index row;
};

SparseMatrix try_ic(const SparseMatrix& a, double drop_tol, int max_fill,
                    double shift) {
  const Index n = a.rows();
  const auto rp = a.row_ptr();
  const auto ci = a.col_index();
  const auto av = a.values();

  // Rows of U, diagonal first, then off-diagonals by ascending column.
  std::vector<std::vector<std::pair<Index, double>>> rows(n);
  // For every column c: the earlier rows k with U(k, c) != 0 and that value.
  std::vector<std::vector<std::pair<Index, double>>> column(n);

  std::vector<double> w(n, 0.0);
  std::vector<char> live(n, 0);
  std::vector<Index> touched;
  for (Index i = 0; i < n; ++i) {
    touched.clear();
    double row_norm = 0.0;
    for (Index k = rp[i]; k < rp[i + 1]; ++k) {
      row_norm += av[k] * av[k];
      const Index c = ci[k];
      if (c < i) continue;
      w[c] = av[k] + (c == i ? shift : 0.0);
      live[c] = 1;
      touched.push_back(c);
    }
    row_norm = std::sqrt(row_norm);
    if (!live[i]) {
      w[i] = shift;
      live[i] = 1;
      touched.push_back(i);
    }
    for (const auto& [k, uki] : column[i]) {
      for (const auto& [c, ukc] : rows[k]) {
        if (c < i) continue;
        if (!live[c]) {
          live[c] = 1;
          w[c] = 0.0;
          touched.push_back(c);
        }
        w[c] -= uki * ukc;
      }
    }
    const double pivot = w[i];
    if (!(pivot > 0.0)) {
      for (Index c : touched) live[c] = 0;
      throw Breakdown{i};
    }
    const double d = std::sqrt(pivot);
    std::vector<std::pair<Index, double>> keep;
    for (Index c : touched) {
      if (c != i && std::abs(w[c]) > drop_tol * row_norm) keep.emplace_back(c, w[c]);
      live[c] = 0;
    }
    if (keep.size() > static_cast<std::size_t>(max_fill)) {
      std::stable_sort(keep.begin(), keep.end(), [](const auto& x, const auto& y) {
        return std::abs(x.second) != std::abs(y.second)
                   ? std::abs(x.second) > std::abs(y.second)
                   : x.first < y.first;
      });
      keep.resize(static_cast<std::size_t>(max_fill));
    }
    std::sort(keep.begin(), keep.end());
    auto& row = rows[i];
    row.emplace_back(i, d);
    for (auto& [c, value] : keep) {
      value /= d;
      row.emplace_back(c, value);
      column[c].emplace_back(i, value);
    }
  }

  std::vector<Index> row_ptr{0}, cols;
  std::vector<double> vals;
  for (const auto& row : rows) {
    for (const auto& [c, v] : row) {
      cols.push_back(c);
      vals.push_back(v);
    }
    row_ptr.push_back(static_cast<Index>(cols.size()));
  }
  return SparseMatrix(n, n, std::move(row_ptr), std::move(cols), std::move(vals));
}

}  // namespace

SolveReport cg_solve(const SparseMatrix& a, std::span<const double> b,
                     const KrylovOptions& options) {
  return conjugate_gradient(a, b, nullptr, options);
}

IcFactor ic_factorize(const SparseMatrix& a, double drop_tol, int max_fill) {
  if (a.rows() != a.cols()) throw Error("ic_factorize: matrix not square");
  if (max_fill < 0 || drop_tol < 0.0) throw Error("ic_factorize: invalid parameters");
  double max_diag = 0.0;
  for (double d : a.diagonal()) max_diag = std::max(max_diag, std::abs(d));
  double shift = 0.0;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    try {
      return {try_ic(a, drop_tol, max_fill, shift), shift};
    } catch (const Breakdown& b) {
      if (attempt == 3)
        throw Error("ic_factorize: non-positive pivot in row " +
                    std::to_string(b.row) + " after diagonal shifts");
      shift = shift == 0.0 ? 1e-3 * max_diag : 2.0 * shift;
    }
  }
  throw Error("ic_factorize: unreachable");
}

void ic_apply(const IcFactor& factor, std::span<const double> r,
              std::span<double> z) {
  const SparseMatrix& u = factor.upper;
  const Index n = u.rows();
  if (r.size() != static_cast<std::size_t>(n) || z.size() != r.size())
    throw Error("ic_apply: dimension mismatch");
  const auto rp = u.row_ptr();
  const auto ci = u.col_index();
  const auto v = u.values();
  // U^T y = r, column sweep over the rows of U.
  std::copy(r.begin(), r.end(), z.begin());
  for (Index i = 0; i < n; ++i) {
    z[i] /= v[rp[i]];
    for (Index k = rp[i] + 1; k < rp[i + 1]; ++k) z[ci[k]] -= v[k] * z[i];
  }
  // U z = y
  for (Index i = n - 1; i >= 0; --i) {
    double s = z[i];
    for (Index k = rp[i] + 1; k < rp[i + 1]; ++k) s -= v[k] * z[ci[k]];
    z[i] = s / v[rp[i]];
  }
}

SolveReport pcg_solve(const SparseMatrix& a, std::span<const double> b,
                      const IcFactor& factor, const KrylovOptions& options) {
  return conjugate_gradient(a, b, &factor, options);
}

}  // namespace vemg
