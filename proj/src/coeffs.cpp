#include "farflow/coeffs.hpp"

#include <cmath>

namespace farflow {

EllipticCoeffs coeffs_at(const Vec& gradient, const GasModel& model) {
  const int n = static_cast<int>(gradient.size());
  const double s = gradient.squaredNorm();
  EllipticCoeffs out;
  out.dim = n;
  if (!model.is_compressible()) {
    out.a = model.rho_bar() * Mat::Identity(n, n);
    out.lambda_min = out.lambda_max = model.rho_bar();
    return out;
  }
  model.require_subsonic(s);
  const double rho = model.density_from_speed(s);
  const double rp = model.rho_prime(s);
  out.a = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    out.a(i, i) = rho + 2.0 * rp * gradient(i) * gradient(i);
    for (int j = i + 1; j < n; ++j) {
      const double v = 2.0 * rp * gradient(i) * gradient(j);
      out.a(i, j) = v;
      out.a(j, i) = v;  // exact symmetry, entry for entry
    }
  }
  // Eigenvalues in closed form: rho + 2 rho' s = rho (1 - M^2) along the
  // gradient, rho with multiplicity n-1 across it.
  const double c2 = model.pressure_prime(rho);
  const double mach2 = s / c2;
  out.lambda_min = rho * (1.0 - mach2);
  out.lambda_max = rho;
  return out;
}

EllipticCoeffs coeffs_at_infinity(const Vec& u_infinity, const GasModel& model) {
  return coeffs_at(u_infinity, model);
}

LipschitzSample lipschitz_estimate(const Vec& p1, const Vec& p2,
                                   const GasModel& model) {
  const double dist = (p1 - p2).norm();
  if (dist == 0.0) {
    throw UndefinedRatioError("coeffs: lipschitz_estimate needs p1 != p2");
  }
  const Mat a1 = coeffs_at(p1, model).a;
  const Mat a2 = coeffs_at(p2, model).a;
  LipschitzSample out;
  out.ratio = (a1 - a2).cwiseAbs().maxCoeff() / dist;
  out.p1 = p1;
  out.p2 = p2;
  return out;
}

double coeff_differential_norm(const Vec& p, const Vec& d,
                               const GasModel& model) {
  const int n = static_cast<int>(p.size());
  if (!model.is_compressible()) return 0.0;
  const double s = p.squaredNorm();
  model.require_subsonic(s);
  const double rp = model.rho_prime(s);
  const double rpp = model.rho_second(s);
  const double pd = p.dot(d);
  // D_d a_ij = 2 rho' (p.d) delta_ij + 4 rho'' (p.d) p_i p_j
  //            + 2 rho' (d_i p_j + p_i d_j)
  Mat da = 2.0 * rp * pd * Mat::Identity(n, n) +
           4.0 * rpp * pd * p * p.transpose() +
           2.0 * rp * (d * p.transpose() + p * d.transpose());
  return da.cwiseAbs().maxCoeff();
}

}  // namespace farflow
