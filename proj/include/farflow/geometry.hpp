#ifndef FARFLOW_GEOMETRY_HPP
#define FARFLOW_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <functional>

#include "farflow/errors.hpp"

namespace farflow {

inline constexpr double kPi = 3.14159265358979323846;

enum class DomainKind { Exterior, Cone };

// Exterior of a sphere of radius a; numerics are n = 3 axisymmetric.
struct ExteriorDomain {
  double obstacle_radius = 1.0;
  int dim = 3;
};

// Infinite divergent cone piece: vertex, half-angle theta0 in (0, pi/2],
// truncated at |x - vertex| = inner_radius.
struct ConeDomain {
  ConeDomain(Eigen::Vector3d vertex, double half_angle, double inner_radius);
  Eigen::Vector3d vertex;
  double half_angle;
  double inner_radius;
  int dim = 3;
  double solid_angle() const;
};

// |Sigma_+| = 2 pi (1 - cos theta0) for n = 3; pure formula, unguarded range.
double solid_angle_of_half_angle(double theta0);

// Tensor grid in (sigma, theta) with sigma = 1/r, uniform spacings.  Node
// (i, j) sits at sigma_i = i dsigma, theta_j = j dtheta.  Row i = 0 is the
// point at infinity (Dirichlet row for Phi); row i = n_r is the inner boundary
// (obstacle or inflow cap).  Column j = 0 is the symmetry axis; column
// j = n_theta is the other axis half (exterior) or the slip lateral boundary
// (cone).
class AxiMesh {
 public:
  AxiMesh(DomainKind kind, double r_base, double theta_max, int n_r,
          int n_theta);

  DomainKind kind() const { return kind_; }
  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  double r_base() const { return r_base_; }
  double sigma_max() const { return sigma_max_; }
  double theta_max() const { return theta_max_; }
  double dsigma() const { return dsigma_; }
  double dtheta() const { return dtheta_; }

  double sigma(int i) const { return i * dsigma_; }
  double theta(int j) const { return j * dtheta_; }
  double r(int i) const;  // throws for i = 0 (point at infinity)

  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * (n_theta_ + 1) + j;
  }
  std::size_t n_nodes() const {
    return static_cast<std::size_t>(n_r_ + 1) * (n_theta_ + 1);
  }

  bool is_infinity_row(int i) const { return i == 0; }
  bool is_inner_row(int i) const { return i == n_r_; }
  bool is_axis(int j) const {
    return j == 0 || (kind_ == DomainKind::Exterior && j == n_theta_);
  }
  bool is_lateral(int j) const {
    return kind_ == DomainKind::Cone && j == n_theta_;
  }

  // cos(theta_a) - cos(theta_b) over the dual angular extent of column j,
  // clipped to [0, theta_max]; the exact integral of sin(theta) d theta.
  double dual_sin_weight(int j) const;
  // Dual angular extent [theta_a, theta_b] of column j.
  double dual_theta_lo(int j) const;
  double dual_theta_hi(int j) const;

  // Radial extent [r_in, r_out] of the dual cell of row i (i >= 1), clipped
  // at the inner boundary.  r_out is finite even for i = 1.
  double dual_r_inner(int i) const;
  double dual_r_outer(int i) const;

  // Physical volume of the dual cell (includes the 2 pi azimuthal factor).
  double cell_volume(int i, int j) const;

  // Integral of f(r_node, theta_node) over the spherical shell r1 <= r <= r2
  // by midpoint quadrature on dual cells clipped to the shell.
  double integrate_shell(double r1, double r2,
                         const std::function<double(double, double)>& f) const;

 private:
  DomainKind kind_;
  double r_base_, sigma_max_, theta_max_, dsigma_, dtheta_;
  int n_r_, n_theta_;
};

AxiMesh build_exterior_mesh(const ExteriorDomain& domain, int n_r, int n_theta);
AxiMesh build_cone_mesh(const ConeDomain& domain, int n_r, int n_theta);

}  // namespace farflow

#endif  // FARFLOW_GEOMETRY_HPP
