#include "farflow/farfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace farflow {

namespace {

// rho and rho' evaluated with the speed clamped just inside the sonic bound,
// so roundoff-level excursions of an accepted field cannot throw.
struct GasAtPoint {
  double rho;
  double rho_prime;
};

GasAtPoint gas_at_speed(const GasModel& model, double q2) {
  if (!model.is_compressible()) {
    return {model.rho_bar(), 0.0};
  }
  const double qcr = model.critical_speed();
  const double cap = (1.0 - 1e-9) * qcr * qcr;
  const double s = std::min(q2, cap);
  return {model.density_from_speed(s), model.rho_prime(s)};
}

}  // namespace

QuadraticForm QuadraticForm::from_coeffs(const EllipticCoeffs& a_inf,
                                         Vec center) {
  QuadraticForm f;
  f.A = a_inf.a.inverse();
  f.A = 0.5 * (f.A + f.A.transpose()).eval();  // keep exact symmetry
  f.center = std::move(center);
  f.dim = a_inf.dim;
  if (f.center.size() != f.dim) {
    throw ConfigurationError("quadratic form: center dimension mismatch");
  }
  return f;
}

double QuadraticForm::comparability_constant() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0) {
    throw ConfigurationError("quadratic form: A is not positive definite");
  }
  return std::max(std::sqrt(hi), 1.0 / std::sqrt(lo));
}

double q_value(const Vec& x, const QuadraticForm& form) {
  const Vec d = x - form.center;
  if (d.norm() == 0.0) {
    throw SingularPointError("Q evaluated at its center");
  }
  return std::sqrt(d.dot(form.A * d));
}

QPowerDerivs q_power_derivatives(const Vec& x, double l,
                                 const QuadraticForm& form) {
  if (l <= 0.0) throw ConfigurationError("q_power_derivatives: l must be > 0");
  const Vec d = x - form.center;
  if (d.norm() == 0.0) {
    throw SingularPointError("Q^{-l} derivatives at the center");
  }
  const double q = std::sqrt(d.dot(form.A * d));
  const Vec ad = form.A * d;
  QPowerDerivs out;
  out.gradient = -l * std::pow(q, -l - 2.0) * ad;
  out.hessian = l * (l + 2.0) * std::pow(q, -l - 4.0) * ad * ad.transpose() -
                l * std::pow(q, -l - 2.0) * form.A;
  return out;
}

double lemma21_residual(const Vec& x, double l, const EllipticCoeffs& a_inf,
                        const QuadraticForm& form) {
  const int n = a_inf.dim;
  if (form.dim != n) {
    throw ConfigurationError("lemma21: dimension mismatch");
  }
  const Mat product = a_inf.a * form.A;
  if ((product - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8) {
    throw ConfigurationError("lemma21: form.A is not the inverse of a_inf");
  }
  const auto derivs = q_power_derivatives(x, l, form);
  const double q = q_value(x, form);
  const double contracted = (a_inf.a.array() * derivs.hessian.array()).sum();
  const double expected = l * (l + 2.0 - n) * std::pow(q, -l - 2.0);
  const double scale = l * (l + 2.0) * std::pow(q, -l - 2.0);
  return (contracted - expected) / scale;
}

double psi(const Vec& x, const ComparisonFunction& cmp) {
  const double q = q_value(x, cmp.form);
  const int n = cmp.form.dim;
  return std::pow(q, 2.0 - n) - std::pow(q, 2.0 - n - cmp.beta);
}

QPowerDerivs psi_derivatives(const Vec& x, const ComparisonFunction& cmp) {
  const int n = cmp.form.dim;
  const auto lead = q_power_derivatives(x, n - 2.0, cmp.form);
  const auto corr = q_power_derivatives(x, n - 2.0 + cmp.beta, cmp.form);
  QPowerDerivs out;
  out.gradient = lead.gradient - corr.gradient;
  out.hessian = lead.hessian - corr.hessian;
  return out;
}

double lpsi_residual(const Vec& x, const Mat& a_at_x,
                     const ComparisonFunction& cmp) {
  const int n = cmp.form.dim;
  const auto derivs = psi_derivatives(x, cmp);
  const double q = q_value(x, cmp.form);
  const double contracted = (a_at_x.array() * derivs.hessian.array()).sum();
  return contracted +
         cmp.beta * (n - 2.0 + cmp.beta) * std::pow(q, -n - cmp.beta);
}

Vec kelvin_map(const Vec& x) {
  const double r2 = x.squaredNorm();
  if (r2 == 0.0) throw SingularPointError("kelvin_map at the origin");
  return x / r2;
}

double KelvinPotential::operator()(const Vec& y) const {
  const double r = y.norm();
  if (r == 0.0) throw SingularPointError("kelvin potential at the origin");
  return std::pow(r, 2.0 - dim_) * phi_(y / (r * r));
}

ConeOrthogonalityReport cone_orthogonality_check(const ConeDomain& cone,
                                                 const QuadraticForm& form,
                                                 int n_radii, int n_azimuth) {
  ConeOrthogonalityReport report;
  const double t0 = cone.half_angle;
  for (int k = 0; k < n_radii; ++k) {
    const double r = cone.inner_radius * std::pow(2.0, k * 0.5);
    for (int m = 0; m < n_azimuth; ++m) {
      const double alpha = 2.0 * kPi * m / n_azimuth;
      Eigen::Vector3d dir(std::cos(t0), std::sin(t0) * std::cos(alpha),
                          std::sin(t0) * std::sin(alpha));
      Eigen::Vector3d normal(-std::sin(t0), std::cos(t0) * std::cos(alpha),
                             std::cos(t0) * std::sin(alpha));
      Vec x = cone.vertex + r * dir;
      const double q = q_value(x, form);
      const Vec grad_q = form.A * (x - form.center) / q;
      report.max_abs = std::max(report.max_abs, std::abs(grad_q.dot(normal)));
      ++report.n_samples;
    }
  }
  return report;
}

namespace {

struct MeridionalDerivs {
  double f_r, f_theta, f_rr, f_rtheta, f_thetatheta;
};

// Central differences of field.phi at (r, theta); on native grids the steps
// hit neighboring nodes exactly, in sigma = 1/r for the radial direction.
MeridionalDerivs phi_derivatives(const FieldSampler& field, double r,
                                 double theta) {
  MeridionalDerivs d{};
  const double dth = field.native_dtheta() > 0.0 ? field.native_dtheta() : 1e-4;
  const double ds = field.native_dsigma();
  const auto phi_rt = [&](double rr, double tt) { return field.phi(rr, tt); };
  const double f0 = phi_rt(r, theta);
  const double f_tp = phi_rt(r, theta + dth);
  const double f_tm = phi_rt(r, theta - dth);
  d.f_theta = (f_tp - f_tm) / (2.0 * dth);
  d.f_thetatheta = (f_tp - 2.0 * f0 + f_tm) / (dth * dth);
  if (ds > 0.0) {
    const double sigma = 1.0 / r;
    const double sp = sigma + ds, sm = sigma - ds;
    const double f_sp = phi_rt(1.0 / sp, theta);
    const double f_sm = phi_rt(1.0 / sm, theta);
    const double f_sigma = (f_sp - f_sm) / (2.0 * ds);
    const double f_sigmasigma = (f_sp - 2.0 * f0 + f_sm) / (ds * ds);
    const double f_sigmatheta =
        (phi_rt(1.0 / sp, theta + dth) - phi_rt(1.0 / sp, theta - dth) -
         phi_rt(1.0 / sm, theta + dth) + phi_rt(1.0 / sm, theta - dth)) /
        (4.0 * ds * dth);
    const double s2 = sigma * sigma;
    d.f_r = -s2 * f_sigma;
    d.f_rr = s2 * s2 * f_sigmasigma + 2.0 * sigma * s2 * f_sigma;
    d.f_rtheta = -s2 * f_sigmatheta;
  } else {
    const double dr = 1e-4 * r;
    const double f_rp = phi_rt(r + dr, theta);
    const double f_rm = phi_rt(r - dr, theta);
    d.f_r = (f_rp - f_rm) / (2.0 * dr);
    d.f_rr = (f_rp - 2.0 * f0 + f_rm) / (dr * dr);
    d.f_rtheta = (phi_rt(r + dr, theta + dth) - phi_rt(r + dr, theta - dth) -
                  phi_rt(r - dr, theta + dth) + phi_rt(r - dr, theta - dth)) /
                 (4.0 * dr * dth);
  }
  return d;
}

// sum a_ij(u) d_ij f for an axisymmetric scalar f, evaluated from meridional
// derivatives: a contraction splits into rho * Laplacian + 2 rho' (u.D)^2 f.
double contract_coeffs(const FieldSampler& field, double r, double theta,
                       const MeridionalDerivs& d) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double alpha = d.f_rr;
  const double beta = d.f_rtheta / r - d.f_theta / (r * r);
  const double gamma = d.f_r / r + d.f_thetatheta / (r * r);
  const double h_zz = alpha * c * c - 2.0 * beta * c * s + gamma * s * s;
  const double h_zs = alpha * c * s + beta * (c * c - s * s) - gamma * c * s;
  const double h_ss = alpha * s * s + 2.0 * beta * c * s + gamma * c * c;
  const double f_s = s * d.f_r + c * d.f_theta / r;
  const double h_azim = f_s / (r * s);  // skip axis samples (s = 0)

  const auto [u_r, u_t] = field.velocity(r, theta);
  const auto [u_z, u_s] = meridional_to_cartesian(u_r, u_t, theta);
  const auto gp = gas_at_speed(field.gas(), u_z * u_z + u_s * u_s);
  const double laplacian = h_zz + h_ss + h_azim;
  const double advective =
      u_z * u_z * h_zz + 2.0 * u_z * u_s * h_zs + u_s * u_s * h_ss;
  return gp.rho * laplacian + 2.0 * gp.rho_prime * advective;
}

double contract_coeffs_psi(const FieldSampler& field, double r, double theta,
                           const ComparisonFunction& cmp) {
  Vec x(3);
  x << r * std::cos(theta), r * std::sin(theta), 0.0;
  const auto derivs = psi_derivatives(x, cmp);
  const auto [u_r, u_t] = field.velocity(r, theta);
  const auto [u_z, u_s] = meridional_to_cartesian(u_r, u_t, theta);
  Vec u(3);
  u << u_z, u_s, 0.0;
  const auto gp = gas_at_speed(field.gas(), u.squaredNorm());
  return gp.rho * derivs.hessian.trace() +
         2.0 * gp.rho_prime * u.dot(derivs.hessian * u);
}

}  // namespace

BarrierReport barrier_sign_check(const FieldSampler& field,
                                 const ComparisonFunction& cmp,
                                 const BarrierCheckConfig& cfg) {
  if (cfg.r_prime <= 0.0) {
    throw ConfigurationError("barrier check: r_prime must be positive");
  }
  BarrierReport report;
  report.r_prime = cfg.r_prime;

  const auto point3 = [](double r, double theta) {
    Vec x(3);
    x << r * std::cos(theta), r * std::sin(theta), 0.0;
    return x;
  };

  // C1 from the inner sphere |x| = R': 2 max |Phi| / psi.
  double c1 = cfg.c1;
  if (c1 <= 0.0) {
    double worst = 0.0;
    const int n_sweep = 128;
    for (int j = 0; j <= n_sweep; ++j) {
      const double theta = field.theta_max() * j / n_sweep;
      const Vec x = point3(cfg.r_prime, theta);
      const double p = psi(x, cmp);
      if (p <= 0.0) {
        throw ConfigurationError(
            "barrier check: psi <= 0 on |x| = R'; increase r_prime (Q must "
            "exceed 1)");
      }
      worst = std::max(worst, std::abs(field.phi(cfg.r_prime, theta)) / p);
    }
    c1 = worst > 0.0 ? 2.0 * worst : 1.0;
  }
  report.c1 = c1;

  const double h2 = field.native_dsigma() * field.native_dsigma() +
                    field.native_dtheta() * field.native_dtheta();
  double psi_rp_min = std::numeric_limits<double>::max();
  for (int j = 0; j <= 32; ++j) {
    psi_rp_min = std::min(
        psi_rp_min, psi(point3(cfg.r_prime, field.theta_max() * j / 32), cmp));
  }
  report.tolerance =
      cfg.tolerance >= 0.0
          ? cfg.tolerance
          : (h2 > 0.0 ? h2 * psi_rp_min : 1e-12);

  // Sign of h± over the sample cloud.
  report.max_h_plus = -std::numeric_limits<double>::max();
  report.max_h_minus = -std::numeric_limits<double>::max();
  for (const auto& [r, theta] : field.sample_points(cfg.r_prime)) {
    if (r < cfg.r_prime * (1.0 - 1e-12)) {
      throw std::domain_error("barrier check: sample inside |x| < R'");
    }
    const double p = psi(point3(r, theta), cmp);
    const double f = field.phi(r, theta);
    report.max_h_plus = std::max(report.max_h_plus, f / c1 - p);
    report.max_h_minus = std::max(report.max_h_minus, -f / c1 - p);
    ++report.n_samples;
  }
  report.pass = std::max(report.max_h_plus, report.max_h_minus) <=
                report.tolerance;

  if (cfg.check_subsolution) {
    // Interior lattice points only: one native step inside every boundary.
    std::vector<std::pair<double, double>> pts;
    const double ds = field.native_dsigma();
    const double dth =
        field.native_dtheta() > 0.0 ? field.native_dtheta() : field.theta_max() / 24;
    const double sigma_cap = 1.0 / field.r_inner();
    if (ds > 0.0) {
      for (double sigma = 2.0 * ds; sigma + ds <= sigma_cap * (1.0 + 1e-12);
           sigma += ds) {
        const double r = 1.0 / sigma;
        if (r < cfg.r_prime || r > field.r_resolved()) continue;
        for (double theta = dth; theta + dth <= field.theta_max() * (1.0 + 1e-12);
             theta += dth) {
          if (theta + dth > field.theta_max() * (1.0 - 1e-12)) break;
          pts.emplace_back(r, theta);
        }
      }
    } else {
      for (int k = 0; k <= 24; ++k) {
        const double r = cfg.r_prime * std::pow(2.0, k / 4.0);
        if (r > field.r_resolved()) break;
        for (double theta = dth; theta < field.theta_max() - 0.5 * dth;
             theta += dth) {
          pts.emplace_back(r, theta);
        }
      }
    }
    double min_sub = std::numeric_limits<double>::max();
    double psi_term_scale = 0.0;
    for (const auto& [r, theta] : pts) {
      const auto d = phi_derivatives(field, r, theta);
      const double lphi = contract_coeffs(field, r, theta, d);
      const double lpsi = contract_coeffs_psi(field, r, theta, cmp);
      min_sub = std::min({min_sub, lphi / c1 - lpsi, -lphi / c1 - lpsi});
      psi_term_scale = std::max(psi_term_scale, std::abs(lpsi));
      ++report.n_subsolution_samples;
    }
    report.min_subsolution = pts.empty() ? 0.0 : min_sub;
    report.subsolution_tolerance =
        h2 > 0.0 ? h2 * std::max(1.0, psi_term_scale) : 1e-9;
    report.subsolution_pass =
        report.min_subsolution >= -report.subsolution_tolerance;
  }
  return report;
}

}  // namespace farflow
