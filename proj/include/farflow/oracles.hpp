#ifndef FARFLOW_ORACLES_HPP
#define FARFLOW_ORACLES_HPP

#include <memory>
#include <vector>

#include "farflow/coeffs.hpp"
#include "farflow/geometry.hpp"
#include "farflow/sampler.hpp"

namespace farflow {

// Volume of the unit n-ball and area of the unit (n-1)-sphere.
double unit_ball_volume(int n);
double unit_sphere_area(int n);

struct PotentialSample {
  double phi = 0.0;  // full potential
  Vec grad;          // full velocity
};

// Uniform flow past the unit-slip sphere |x| = a:
//   phi = U x_1 (1 + a^n / ((n-1) |x|^n)),
// harmonic, slip at r = a, with velocity defect decaying like r^{-n}.
PotentialSample sphere_dipole(double U, double a, int n, const Vec& x);
double sphere_dipole_phi_diff(double U, double a, int n, const Vec& x);

// Source of strength m at the origin in a constant-density flow:
//   phi = -m / (rho_bar (n-2) |S^{n-1}|) |x|^{2-n}.
PotentialSample point_source(double m, double rho_bar, int n, const Vec& x);

// Subsonic root q of rho(q^2) q = m / (|Sigma_+| r^{n-1}); closed form for
// incompressible, bisection on the strictly increasing subsonic branch
// otherwise.
double radial_cone_speed(double m, const ConeDomain& domain,
                         const GasModel& model, double r, int n = 3);

// Largest mass flux with a subsonic radial branch at radius r.
double sonic_flux_limit(const ConeDomain& domain, const GasModel& model,
                        double r, int n = 3);

// --- sampler adapters (n = 3 axisymmetric) ---

class SphereDipoleField : public FieldSampler {
 public:
  SphereDipoleField(double U, double a, double rho_bar = 1.0);
  double phi(double r, double theta) const override;
  std::array<double, 2> velocity(double r, double theta) const override;
  const GasModel& gas() const override { return model_; }
  double axial_speed_infinity() const override { return u_; }
  DomainKind domain_kind() const override { return DomainKind::Exterior; }
  double theta_max() const override { return kPi; }
  double r_inner() const override { return a_; }
  double r_resolved() const override { return 1e9; }

  double speed_u() const { return u_; }
  double radius() const { return a_; }

 private:
  double u_, a_;
  GasModel model_;
};

class RadialConeField : public FieldSampler {
 public:
  RadialConeField(double m, const ConeDomain& domain, const GasModel& model);
  double phi(double r, double theta) const override;
  std::array<double, 2> velocity(double r, double theta) const override;
  const GasModel& gas() const override { return model_; }
  double axial_speed_infinity() const override { return 0.0; }
  DomainKind domain_kind() const override { return DomainKind::Cone; }
  double theta_max() const override { return cone_.half_angle; }
  double r_inner() const override { return cone_.inner_radius; }
  double r_resolved() const override { return 1e9; }

  double mass_flux() const { return m_; }
  const ConeDomain& cone() const { return cone_; }

 private:
  double m_;
  ConeDomain cone_;
  GasModel model_;
  // phi(r) = -int_r^inf q(s) ds tabulated on a sigma grid (Hermite pieces).
  std::vector<double> phi_table_, slope_table_;
  double table_dsigma_ = 0.0;
  double phi_of_r(double r) const;
};

class PointSourceField : public FieldSampler {
 public:
  PointSourceField(double m, double rho_bar, double inner_radius);
  double phi(double r, double theta) const override;
  std::array<double, 2> velocity(double r, double theta) const override;
  const GasModel& gas() const override { return model_; }
  double axial_speed_infinity() const override { return 0.0; }
  DomainKind domain_kind() const override { return DomainKind::Exterior; }
  double theta_max() const override { return kPi; }
  double r_inner() const override { return inner_; }
  double r_resolved() const override { return 1e9; }

  double flux() const { return m_; }

 private:
  double m_, inner_;
  GasModel model_;
};

// --- optimality certificate (mean-value lower bound on dyadic shells) ---

struct ShellCertificate {
  double radius = 0.0;
  double flux = 0.0;         // quadrature of rho u . l over the shell
  double flux_rel_error = 0.0;
  double best_theta = 0.0;   // sample point realizing the mean-value bound
  double lower_bound = 0.0;  // (m / |Sigma_+|) R^{1-n}
  double margin = 0.0;       // Lambda |grad phi(x_R)| - lower_bound
};

struct OptimalityReport {
  double m = 0.0;
  double lambda_upper = 0.0;
  double conservation_tolerance = 0.0;
  std::vector<ShellCertificate> shells;
  bool conservation_pass = false;
  bool margin_pass = false;
  bool vacuous = false;  // m = 0: the lower bound degenerates to 0
};

OptimalityReport optimality_certificate(const FieldSampler& field,
                                        const ConeDomain& cone, double m,
                                        const std::vector<double>& shell_radii,
                                        double conservation_tol,
                                        double lambda_upper = 0.0);

}  // namespace farflow

#endif  // FARFLOW_ORACLES_HPP
