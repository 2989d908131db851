#include "farflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace farflow {

double unit_ball_volume(int n) {
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

PotentialSample sphere_dipole(double U, double a, int n, const Vec& x) {
  const double r = x.norm();
  if (r < a * (1.0 - 1e-12)) {
    throw std::domain_error("sphere_dipole: point inside the obstacle");
  }
  const double an = std::pow(a, n);
  const double rn = std::pow(r, n);
  PotentialSample out;
  out.phi = U * x(0) * (1.0 + an / ((n - 1.0) * rn));
  out.grad = Vec::Zero(n);
  out.grad(0) = U * (1.0 + an / ((n - 1.0) * rn));
  out.grad += (-U * x(0) * n * an / ((n - 1.0) * std::pow(r, n + 2))) * x;
  return out;
}

double sphere_dipole_phi_diff(double U, double a, int n, const Vec& x) {
  const double r = x.norm();
  return U * std::pow(a, n) * x(0) / ((n - 1.0) * std::pow(r, n));
}

PotentialSample point_source(double m, double rho_bar, int n, const Vec& x) {
  const double r = x.norm();
  if (r == 0.0) throw SingularPointError("point_source at the origin");
  if (m == 0.0) {
    PotentialSample out;
    out.phi = 0.0;
    out.grad = Vec::Zero(n);
    return out;
  }
  const double omega = unit_sphere_area(n);
  PotentialSample out;
  out.phi = -m / (rho_bar * (n - 2.0) * omega) * std::pow(r, 2.0 - n);
  out.grad = m / (rho_bar * omega) * std::pow(r, 1.0 - n) * (x / r);
  return out;
}

double sonic_flux_limit(const ConeDomain& domain, const GasModel& model,
                        double r, int n) {
  if (!model.is_compressible()) {
    return std::numeric_limits<double>::infinity();
  }
  const double qcr = model.critical_speed();
  const double rho_cr = model.density_from_speed(qcr * qcr * (1.0 - 1e-14));
  return rho_cr * qcr * domain.solid_angle() * std::pow(r, n - 1.0);
}

double radial_cone_speed(double m, const ConeDomain& domain,
                         const GasModel& model, double r, int n) {
  if (m < 0.0) throw std::domain_error("radial_cone_speed: m must be >= 0");
  const double target = m / (domain.solid_angle() * std::pow(r, n - 1.0));
  if (!model.is_compressible()) {
    return target / model.rho_bar();
  }
  if (m > sonic_flux_limit(domain, model, r, n)) {
    throw InfeasibleFluxError(
        "radial_cone_speed: flux " + std::to_string(m) +
        " exceeds the sonic maximum at r = " + std::to_string(r));
  }
  // rho(q^2) q is strictly increasing on [0, q_cr); bisect.
  double lo = 0.0, hi = model.critical_speed() * (1.0 - 1e-14);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (model.density_from_speed(mid * mid) * mid < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

SphereDipoleField::SphereDipoleField(double U, double a, double rho_bar)
    : u_(U), a_(a), model_(GasModel::incompressible(rho_bar)) {}

double SphereDipoleField::phi(double r, double theta) const {
  // Phi = U a^3 cos(theta) / (2 r^2) for n = 3.
  return u_ * a_ * a_ * a_ * std::cos(theta) / (2.0 * r * r);
}

std::array<double, 2> SphereDipoleField::velocity(double r,
                                                  double theta) const {
  const double ratio = std::pow(a_ / r, 3);
  return {u_ * std::cos(theta) * (1.0 - ratio),
          -u_ * std::sin(theta) * (1.0 + 0.5 * ratio)};
}

RadialConeField::RadialConeField(double m, const ConeDomain& domain,
                                 const GasModel& model)
    : m_(m), cone_(domain), model_(model) {
  if (model_.is_compressible()) {
    // phi(sigma) = -int_0^sigma m / (|Sigma_+| rho(q(1/s)^2)) ds, accumulated
    // by Simpson pairs on a fine uniform grid, stored with exact slopes for
    // cubic Hermite evaluation.
    const int n_cells = 4096;  // even
    const double sigma_hi = 1.0 / cone_.inner_radius;
    table_dsigma_ = sigma_hi / n_cells;
    const auto integrand = [&](double sigma) {
      if (sigma == 0.0) return m_ / (cone_.solid_angle() * model_.stagnation_density());
      const double q = radial_cone_speed(m_, cone_, model_, 1.0 / sigma);
      return m_ / (cone_.solid_angle() * model_.density_from_speed(q * q));
    };
    phi_table_.resize(n_cells + 1);
    slope_table_.resize(n_cells + 1);
    phi_table_[0] = 0.0;
    slope_table_[0] = -integrand(0.0);
    for (int k = 2; k <= n_cells; k += 2) {
      const double s0 = (k - 2) * table_dsigma_;
      const double s1 = (k - 1) * table_dsigma_;
      const double s2 = k * table_dsigma_;
      const double f0 = integrand(s0), f1 = integrand(s1), f2 = integrand(s2);
      phi_table_[k] =
          phi_table_[k - 2] - table_dsigma_ / 3.0 * (f0 + 4.0 * f1 + f2);
      // midpoint value via half-interval Simpson
      const double fm1 = integrand(s0 + 0.5 * table_dsigma_);
      phi_table_[k - 1] = phi_table_[k - 2] -
                          table_dsigma_ / 12.0 * (f0 + 4.0 * fm1 + f1) * 2.0;
      slope_table_[k - 1] = -f1;
      slope_table_[k] = -f2;
    }
  }
}

double RadialConeField::phi_of_r(double r) const {
  if (!model_.is_compressible()) {
    return -m_ / (model_.rho_bar() * cone_.solid_angle() * r);
  }
  const double sigma_hi = table_dsigma_ * (phi_table_.size() - 1);
  const double sigma = std::clamp(1.0 / r, 0.0, sigma_hi);
  const double pos = sigma / table_dsigma_;
  const int k = std::min(static_cast<int>(pos),
                         static_cast<int>(phi_table_.size()) - 2);
  const double t = pos - k;
  const double h = table_dsigma_;
  const double p0 = phi_table_[k], p1 = phi_table_[k + 1];
  const double d0 = slope_table_[k], d1 = slope_table_[k + 1];
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * h * d1;
}

double RadialConeField::phi(double r, double theta) const {
  (void)theta;
  return phi_of_r(r);
}

std::array<double, 2> RadialConeField::velocity(double r, double theta) const {
  (void)theta;
  return {radial_cone_speed(m_, cone_, model_, r), 0.0};
}

PointSourceField::PointSourceField(double m, double rho_bar,
                                   double inner_radius)
    : m_(m), inner_(inner_radius), model_(GasModel::incompressible(rho_bar)) {}

double PointSourceField::phi(double r, double theta) const {
  (void)theta;
  if (m_ == 0.0) return 0.0;
  return -m_ / (model_.rho_bar() * unit_sphere_area(3)) / r;
}

std::array<double, 2> PointSourceField::velocity(double r,
                                                 double theta) const {
  (void)theta;
  return {m_ / (model_.rho_bar() * unit_sphere_area(3) * r * r), 0.0};
}

OptimalityReport optimality_certificate(const FieldSampler& field,
                                        const ConeDomain& cone, double m,
                                        const std::vector<double>& shell_radii,
                                        double conservation_tol,
                                        double lambda_upper) {
  OptimalityReport report;
  report.m = m;
  report.conservation_tolerance = conservation_tol;
  report.lambda_upper = lambda_upper > 0.0
                            ? lambda_upper
                            : field.gas().stagnation_density();
  report.vacuous = (m == 0.0);

  const double solid = cone.solid_angle();
  const int n_theta = 256;
  bool cons_ok = true, margin_ok = true;
  for (const double radius : shell_radii) {
    ShellCertificate cert;
    cert.radius = radius;
    // Trapezoid quadrature of rho u.l over the spherical cap.
    double flux = 0.0;
    double best = -std::numeric_limits<double>::max();
    for (int j = 0; j <= n_theta; ++j) {
      const double theta = cone.half_angle * j / n_theta;
      const auto [u_r, u_t] = field.velocity(radius, theta);
      const double q2 = u_r * u_r + u_t * u_t;
      const GasModel& gas = field.gas();
      double rho;
      if (gas.is_compressible()) {
        const double qcr = gas.critical_speed();
        rho = gas.density_from_speed(std::min(q2, (1.0 - 1e-9) * qcr * qcr));
      } else {
        rho = gas.rho_bar();
      }
      const double weight = (j == 0 || j == n_theta) ? 0.5 : 1.0;
      flux += weight * rho * u_r * std::sin(theta);
      if (rho * u_r > best) {
        best = rho * u_r;
        cert.best_theta = theta;
      }
    }
    flux *= 2.0 * kPi * radius * radius * cone.half_angle / n_theta;
    cert.flux = flux;
    cert.flux_rel_error = m != 0.0 ? std::abs(flux - m) / m : std::abs(flux);
    cert.lower_bound = (m / solid) * std::pow(radius, -2.0);
    const auto [u_r, u_t] = field.velocity(radius, cert.best_theta);
    cert.margin = report.lambda_upper * std::sqrt(u_r * u_r + u_t * u_t) -
                  cert.lower_bound;
    cons_ok = cons_ok && cert.flux_rel_error <= conservation_tol;
    margin_ok = margin_ok && cert.margin >= 0.0;
    report.shells.push_back(cert);
  }
  report.conservation_pass = cons_ok;
  report.margin_pass = report.vacuous ? true : margin_ok;
  return report;
}

}  // namespace farflow
