#include "farflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace farflow {

double solid_angle_of_half_angle(double theta0) {
  return 2.0 * kPi * (1.0 - std::cos(theta0));
}

ConeDomain::ConeDomain(Eigen::Vector3d vertex_in, double half_angle_in,
                       double inner_radius_in)
    : vertex(std::move(vertex_in)),
      half_angle(half_angle_in),
      inner_radius(inner_radius_in) {
  if (!(half_angle > 0.0 && half_angle <= kPi / 2.0)) {
    throw ConfigurationError("cone: half angle must lie in (0, pi/2], got " +
                             std::to_string(half_angle));
  }
  if (inner_radius <= 0.0) {
    throw ConfigurationError("cone: inner radius must be positive");
  }
}

double ConeDomain::solid_angle() const {
  return solid_angle_of_half_angle(half_angle);
}

AxiMesh::AxiMesh(DomainKind kind, double r_base, double theta_max, int n_r,
                 int n_theta)
    : kind_(kind),
      r_base_(r_base),
      sigma_max_(1.0 / r_base),
      theta_max_(theta_max),
      n_r_(n_r),
      n_theta_(n_theta) {
  if (n_r < 8 || n_theta < 8) {
    throw ConfigurationError("mesh: need at least 8 cells per direction");
  }
  if (r_base <= 0.0) throw ConfigurationError("mesh: r_base must be positive");
  dsigma_ = sigma_max_ / n_r_;
  dtheta_ = theta_max_ / n_theta_;
}

double AxiMesh::r(int i) const {
  if (i <= 0) {
    throw SingularPointError("mesh: row 0 is the point at infinity");
  }
  return 1.0 / sigma(i);
}

double AxiMesh::dual_theta_lo(int j) const {
  return std::max(0.0, theta(j) - 0.5 * dtheta_);
}

double AxiMesh::dual_theta_hi(int j) const {
  return std::min(theta_max_, theta(j) + 0.5 * dtheta_);
}

double AxiMesh::dual_sin_weight(int j) const {
  return std::cos(dual_theta_lo(j)) - std::cos(dual_theta_hi(j));
}

double AxiMesh::dual_r_inner(int i) const {
  const double s_hi = std::min(sigma_max_, sigma(i) + 0.5 * dsigma_);
  return 1.0 / s_hi;
}

double AxiMesh::dual_r_outer(int i) const {
  const double s_lo = sigma(i) - 0.5 * dsigma_;
  if (s_lo <= 0.0) {
    throw SingularPointError("mesh: dual cell of row 0 is unbounded");
  }
  return 1.0 / s_lo;
}

double AxiMesh::cell_volume(int i, int j) const {
  const double r_in = dual_r_inner(i);
  const double r_out = dual_r_outer(i);
  return 2.0 * kPi * dual_sin_weight(j) *
         (r_out * r_out * r_out - r_in * r_in * r_in) / 3.0;
}

double AxiMesh::integrate_shell(
    double r1, double r2, const std::function<double(double, double)>& f) const {
  double total = 0.0;
  for (int i = 1; i <= n_r_; ++i) {
    const double lo = std::max(r1, dual_r_inner(i));
    const double hi = std::min(r2, dual_r_outer(i));
    if (hi <= lo) continue;
    const double radial = (hi * hi * hi - lo * lo * lo) / 3.0;
    for (int j = 0; j <= n_theta_; ++j) {
      total += 2.0 * kPi * dual_sin_weight(j) * radial * f(r(i), theta(j));
    }
  }
  return total;
}

AxiMesh build_exterior_mesh(const ExteriorDomain& domain, int n_r,
                            int n_theta) {
  if (domain.obstacle_radius <= 0.0) {
    throw ConfigurationError("exterior domain: radius must be positive");
  }
  return AxiMesh(DomainKind::Exterior, domain.obstacle_radius, kPi, n_r,
                 n_theta);
}

AxiMesh build_cone_mesh(const ConeDomain& domain, int n_r, int n_theta) {
  return AxiMesh(DomainKind::Cone, domain.inner_radius, domain.half_angle, n_r,
                 n_theta);
}

}  // namespace farflow
