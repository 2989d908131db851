#include "farflow/sampler.hpp"

#include <cmath>

namespace farflow {

std::array<double, 2> meridional_to_cartesian(double u_r, double u_theta,
                                              double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {u_r * c - u_theta * s, u_r * s + u_theta * c};
}

std::vector<std::pair<double, double>> FieldSampler::sample_points(
    double r_min) const {
  // Default: log-spaced shells times a uniform angular sweep.
  std::vector<std::pair<double, double>> pts;
  const double r_max = std::min(r_resolved(), 4096.0 * r_min);
  const int n_shells = 48, n_angles = 48;
  for (int k = 0; k <= n_shells; ++k) {
    const double r =
        r_min * std::pow(r_max / r_min, static_cast<double>(k) / n_shells);
    for (int j = 0; j <= n_angles; ++j) {
      pts.emplace_back(r, theta_max() * j / n_angles);
    }
  }
  return pts;
}

double FieldSampler::speed_error(double r, double theta) const {
  const auto [u_r, u_t] = velocity(r, theta);
  const double u1 = axial_speed_infinity();
  const double dr = u_r - u1 * std::cos(theta);
  const double dt = u_t + u1 * std::sin(theta);
  return std::sqrt(dr * dr + dt * dt);
}

double FieldSampler::speed(double r, double theta) const {
  const auto [u_r, u_t] = velocity(r, theta);
  return std::sqrt(u_r * u_r + u_t * u_t);
}

}  // namespace farflow
