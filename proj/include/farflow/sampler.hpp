#ifndef FARFLOW_SAMPLER_HPP
#define FARFLOW_SAMPLER_HPP

#include <array>
#include <utility>
#include <vector>

#include "farflow/gas.hpp"
#include "farflow/geometry.hpp"

namespace farflow {

// Meridional-plane view of an axisymmetric field.  Points are (r, theta) with
// theta measured from the symmetry axis; the Cartesian embedding at azimuth 0
// is x = (r cos theta, r sin theta, 0).
//
// Solver fields and closed-form oracle fields implement the same interface so
// the far-field checks and the rate fits run unchanged on either.
class FieldSampler {
 public:
  virtual ~FieldSampler() = default;

  // Potential difference Phi = phi - phi_inf, gauge Phi(inf) = 0.
  virtual double phi(double r, double theta) const = 0;

  // Total velocity (u_r, u_theta) including the free stream.
  virtual std::array<double, 2> velocity(double r, double theta) const = 0;

  virtual const GasModel& gas() const = 0;

  // Axial free-stream speed q1_inf; 0 in nozzle mode.
  virtual double axial_speed_infinity() const = 0;

  virtual DomainKind domain_kind() const = 0;
  virtual double theta_max() const = 0;
  virtual double r_inner() const = 0;

  // Largest radius at which the field is resolved; exact fields report a
  // large sentinel.
  virtual double r_resolved() const = 0;

  // Native grid spacings for finite differencing; 0 means "exact field, any
  // step is fine".
  virtual double native_dsigma() const { return 0.0; }
  virtual double native_dtheta() const { return 0.0; }

  // Sample set covering r_min <= r <= r_resolved: mesh nodes for solver
  // fields, synthetic shells for exact fields.
  virtual std::vector<std::pair<double, double>> sample_points(
      double r_min) const;

  // Speed of the velocity defect |u - u_inf| at a point.
  double speed_error(double r, double theta) const;
  // |u|.
  double speed(double r, double theta) const;
};

// Cartesian velocity components (axis, transverse) at azimuth 0.
std::array<double, 2> meridional_to_cartesian(double u_r, double u_theta,
                                              double theta);

}  // namespace farflow

#endif  // FARFLOW_SAMPLER_HPP
