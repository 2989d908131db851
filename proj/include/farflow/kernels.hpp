#ifndef FARFLOW_KERNELS_HPP
#define FARFLOW_KERNELS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace farflow {

// Execution policy for the grid kernels.  Every kernel has a serial reference
// implementation and an OpenMP one; tests compare them and the benchmark
// target times them against each other.
enum class ExecPolicy { Serial, OpenMP };

// Five-point stencil operator on an (n_r+1) x (n_theta+1) node grid, stored
// row-major with index i*(n_theta+1)+j.  Edge coefficient arrays hold the
// off-diagonal couplings: coef_r(i,j) couples (i,j)-(i+1,j) for i < n_r,
// coef_t(i,j) couples (i,j)-(i,j+1) for j < n_theta.  diag holds the full
// diagonal (including couplings to eliminated Dirichlet nodes), so
//   y = diag.*x - coef_r*x_south/north - coef_t*x_west/east
// is symmetric positive definite whenever diag >= sum of incident couplings.
struct StencilOperator {
  int n_r = 0;
  int n_theta = 0;
  std::vector<double> diag;
  std::vector<double> coef_r;
  std::vector<double> coef_t;

  std::size_t size() const {
    return static_cast<std::size_t>(n_r + 1) * (n_theta + 1);
  }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * (n_theta + 1) + j;
  }
};

void apply_stencil(const StencilOperator& op, std::span<const double> x,
                   std::span<double> y, ExecPolicy policy);

double dot(std::span<const double> x, std::span<const double> y,
           ExecPolicy policy);

double norm_inf(std::span<const double> x, ExecPolicy policy);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y,
          ExecPolicy policy);

// x = z + beta * x
void xpby(std::span<const double> z, double beta, std::span<double> x,
          ExecPolicy policy);

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradients; x holds the initial guess on
// entry and the solution on exit.  tol is relative to |b|.
CgResult cg_solve(const StencilOperator& op, std::span<const double> b,
                  std::span<double> x, double tol, int max_iters,
                  ExecPolicy policy);

}  // namespace farflow

#endif  // FARFLOW_KERNELS_HPP
