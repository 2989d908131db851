#include "farflow/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "farflow/errors.hpp"

namespace farflow {

namespace {

inline double stencil_row(const StencilOperator& op, const double* x, int i,
                          int j) {
  const int nt = op.n_theta;
  const std::size_t p = op.idx(i, j);
  double v = op.diag[p] * x[p];
  if (i < op.n_r) v -= op.coef_r[p] * x[p + nt + 1];
  if (i > 0) v -= op.coef_r[p - nt - 1] * x[p - nt - 1];
  if (j < nt) v -= op.coef_t[p] * x[p + 1];
  if (j > 0) v -= op.coef_t[p - 1] * x[p - 1];
  return v;
}

}  // namespace

void apply_stencil(const StencilOperator& op, std::span<const double> x,
                   std::span<double> y, ExecPolicy policy) {
  const int nr = op.n_r, nt = op.n_theta;
  const double* xp = x.data();
  double* yp = y.data();
  if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i <= nr; ++i) {
      for (int j = 0; j <= nt; ++j) {
        yp[op.idx(i, j)] = stencil_row(op, xp, i, j);
      }
    }
  } else {
    for (int i = 0; i <= nr; ++i) {
      for (int j = 0; j <= nt; ++j) {
        yp[op.idx(i, j)] = stencil_row(op, xp, i, j);
      }
    }
  }
}

double dot(std::span<const double> x, std::span<const double> y,
           ExecPolicy policy) {
  const std::size_t n = x.size();
  double acc = 0.0;
  if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::size_t k = 0; k < n; ++k) acc += x[k] * y[k];
  } else {
    for (std::size_t k = 0; k < n; ++k) acc += x[k] * y[k];
  }
  return acc;
}

double norm_inf(std::span<const double> x, ExecPolicy policy) {
  const std::size_t n = x.size();
  double m = 0.0;
  if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::abs(x[k]));
  } else {
    for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::abs(x[k]));
  }
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y,
          ExecPolicy policy) {
  const std::size_t n = x.size();
  if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
  } else {
    for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
  }
}

void xpby(std::span<const double> z, double beta, std::span<double> x,
          ExecPolicy policy) {
  const std::size_t n = x.size();
  if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < n; ++k) x[k] = z[k] + beta * x[k];
  } else {
    for (std::size_t k = 0; k < n; ++k) x[k] = z[k] + beta * x[k];
  }
}

CgResult cg_solve(const StencilOperator& op, std::span<const double> b,
                  std::span<double> x, double tol, int max_iters,
                  ExecPolicy policy) {
  const std::size_t n = op.size();
  std::vector<double> r(n), z(n), p(n), ap(n);

  apply_stencil(op, x, std::span<double>(ap), policy);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - ap[k];

  std::vector<double> inv_diag(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (op.diag[k] <= 0.0) {
      throw LinearAlgebraError("cg: non-positive diagonal entry", 0.0);
    }
    inv_diag[k] = 1.0 / op.diag[k];
  }

  const double b_norm = std::sqrt(dot(b, b, policy));
  const double stop = tol * (b_norm > 0.0 ? b_norm : 1.0);

  for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
  p = z;
  double rz = dot(r, z, policy);

  CgResult res;
  double r_norm = std::sqrt(dot(r, r, policy));
  if (r_norm <= stop) {
    res.converged = true;
    res.relative_residual = b_norm > 0.0 ? r_norm / b_norm : r_norm;
    return res;
  }

  for (int it = 1; it <= max_iters; ++it) {
    apply_stencil(op, p, std::span<double>(ap), policy);
    const double pap = dot(p, ap, policy);
    if (pap <= 0.0) {
      throw LinearAlgebraError("cg: operator not positive definite", r_norm);
    }
    const double alpha = rz / pap;
    axpy(alpha, p, x, policy);
    axpy(-alpha, ap, std::span<double>(r), policy);
    r_norm = std::sqrt(dot(r, r, policy));
    res.iterations = it;
    if (r_norm <= stop) {
      res.converged = true;
      break;
    }
    for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
    const double rz_new = dot(r, z, policy);
    xpby(z, rz_new / rz, std::span<double>(p), policy);
    rz = rz_new;
  }
  res.relative_residual = b_norm > 0.0 ? r_norm / b_norm : r_norm;
  return res;
}

}  // namespace farflow
