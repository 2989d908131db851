#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "farflow/errors.hpp"
#include "farflow/kernels.hpp"

using namespace farflow;

namespace {

// Random SPD stencil: positive couplings, diagonally dominant.
StencilOperator random_operator(int n_r, int n_theta, unsigned seed) {
  StencilOperator op;
  op.n_r = n_r;
  op.n_theta = n_theta;
  const std::size_t n = op.size();
  op.diag.assign(n, 0.0);
  op.coef_r.assign(n, 0.0);
  op.coef_t.assign(n, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  for (int i = 0; i < n_r; ++i) {
    for (int j = 0; j <= n_theta; ++j) {
      const double c = pos(rng);
      op.coef_r[op.idx(i, j)] = c;
      op.diag[op.idx(i, j)] += c;
      op.diag[op.idx(i + 1, j)] += c;
    }
  }
  for (int i = 0; i <= n_r; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const double c = pos(rng);
      op.coef_t[op.idx(i, j)] = c;
      op.diag[op.idx(i, j)] += c;
      op.diag[op.idx(i, j + 1)] += c;
    }
  }
  for (std::size_t k = 0; k < n; ++k) op.diag[k] += 0.05;  // make definite
  return op;
}

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::vector<double> v(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("serial and OpenMP stencil applications agree bitwise") {
  const StencilOperator op = random_operator(37, 23, 1);
  const std::vector<double> x = random_vector(op.size(), 2);
  std::vector<double> ys(op.size()), yp(op.size());
  apply_stencil(op, x, std::span<double>(ys), ExecPolicy::Serial);
  apply_stencil(op, x, std::span<double>(yp), ExecPolicy::OpenMP);
  for (std::size_t k = 0; k < op.size(); ++k) CHECK(ys[k] == yp[k]);
}

TEST_CASE("stencil application is symmetric") {
  const StencilOperator op = random_operator(19, 17, 3);
  const std::vector<double> x = random_vector(op.size(), 4);
  const std::vector<double> y = random_vector(op.size(), 5);
  std::vector<double> ax(op.size()), ay(op.size());
  apply_stencil(op, x, std::span<double>(ax), ExecPolicy::Serial);
  apply_stencil(op, y, std::span<double>(ay), ExecPolicy::Serial);
  const double xay = dot(x, ay, ExecPolicy::Serial);
  const double yax = dot(y, ax, ExecPolicy::Serial);
  CHECK(xay == doctest::Approx(yax).epsilon(1e-13));
}

TEST_CASE("reductions agree across policies") {
  const std::vector<double> x = random_vector(10007, 6);
  const std::vector<double> y = random_vector(10007, 7);
  CHECK(dot(x, y, ExecPolicy::OpenMP) ==
        doctest::Approx(dot(x, y, ExecPolicy::Serial)).epsilon(1e-13));
  CHECK(norm_inf(x, ExecPolicy::OpenMP) == norm_inf(x, ExecPolicy::Serial));
}

TEST_CASE("axpy and xpby agree across policies") {
  const std::vector<double> x = random_vector(4097, 8);
  std::vector<double> ys = random_vector(4097, 9);
  std::vector<double> yp = ys;
  axpy(0.37, x, std::span<double>(ys), ExecPolicy::Serial);
  axpy(0.37, x, std::span<double>(yp), ExecPolicy::OpenMP);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(ys[k] == yp[k]);

  std::vector<double> zs = random_vector(4097, 10);
  std::vector<double> zp = zs;
  xpby(x, -0.8, std::span<double>(zs), ExecPolicy::Serial);
  xpby(x, -0.8, std::span<double>(zp), ExecPolicy::OpenMP);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(zs[k] == zp[k]);
}

TEST_CASE("cg solves the system to the requested residual") {
  const StencilOperator op = random_operator(25, 25, 11);
  const std::vector<double> x_true = random_vector(op.size(), 12);
  std::vector<double> b(op.size());
  apply_stencil(op, x_true, std::span<double>(b), ExecPolicy::Serial);

  for (const auto policy : {ExecPolicy::Serial, ExecPolicy::OpenMP}) {
    std::vector<double> x(op.size(), 0.0);
    const CgResult res =
        cg_solve(op, b, std::span<double>(x), 1e-12, 10000, policy);
    CHECK(res.converged);
    CHECK(res.relative_residual <= 1e-12);
    std::vector<double> ax(op.size());
    apply_stencil(op, x, std::span<double>(ax), ExecPolicy::Serial);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      err = std::max(err, std::abs(ax[k] - b[k]));
      scale = std::max(scale, std::abs(b[k]));
    }
    CHECK(err <= 1e-10 * scale);
  }
}

TEST_CASE("cg with a converged initial guess returns immediately") {
  const StencilOperator op = random_operator(15, 15, 13);
  std::vector<double> x_true = random_vector(op.size(), 14);
  std::vector<double> b(op.size());
  apply_stencil(op, x_true, std::span<double>(b), ExecPolicy::Serial);
  std::vector<double> x(op.size(), 0.0);
  cg_solve(op, b, std::span<double>(x), 1e-13, 10000, ExecPolicy::Serial);
  const CgResult again =
      cg_solve(op, b, std::span<double>(x), 1e-12, 10000, ExecPolicy::Serial);
  CHECK(again.iterations == 0);
  CHECK(again.converged);
}

TEST_CASE("non-positive diagonal rejected") {
  StencilOperator op = random_operator(9, 9, 15);
  op.diag[5] = 0.0;
  std::vector<double> b(op.size(), 1.0), x(op.size(), 0.0);
  CHECK_THROWS_AS(
      cg_solve(op, b, std::span<double>(x), 1e-10, 100, ExecPolicy::Serial),
      LinearAlgebraError);
}
