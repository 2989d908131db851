#ifndef FARFLOW_COEFFS_HPP
#define FARFLOW_COEFFS_HPP

#include <Eigen/Dense>

#include "farflow/gas.hpp"

namespace farflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Coefficients of the quasi-linear potential equation in non-divergence form,
//   a_ij(u) = rho(|u|^2) delta_ij + 2 rho'(|u|^2) u_i u_j,
// with its two distinct eigenvalues: rho (1 - M^2) along u and rho across.
struct EllipticCoeffs {
  Mat a;             // symmetric n x n
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int dim = 0;
};

EllipticCoeffs coeffs_at(const Vec& gradient, const GasModel& model);

// a_ij evaluated at the far-field velocity; for u_inf = 0 this is the
// stagnation density times the identity.
EllipticCoeffs coeffs_at_infinity(const Vec& u_infinity, const GasModel& model);

struct LipschitzSample {
  double ratio = 0.0;  // max_ij |a_ij(p1) - a_ij(p2)| / |p1 - p2|
  Vec p1, p2;
};

LipschitzSample lipschitz_estimate(const Vec& p1, const Vec& p2,
                                   const GasModel& model);

// Directional derivative of the coefficient matrix at p along d (|d| = 1),
// max_ij |D a_ij|; the p1 -> p2 limit of lipschitz_estimate.
double coeff_differential_norm(const Vec& p, const Vec& d,
                               const GasModel& model);

}  // namespace farflow

#endif  // FARFLOW_COEFFS_HPP
