#include "farflow/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "farflow/farfield.hpp"
#include "farflow/oracles.hpp"

namespace farflow {

std::vector<double> dyadic_shells(double r0, int count) {
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(r0 * std::pow(2.0, 0.5 * k));
  return out;
}

RateFit fit_rate(const std::vector<double>& radii,
                 const std::vector<double>& sups) {
  RateFit fit;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (sups[k] <= 0.0) {
      ++fit.n_excluded_zero;
      continue;
    }
    lx.push_back(std::log(radii[k]));
    ly.push_back(std::log(sups[k]));
    fit.radii.push_back(radii[k]);
    fit.sup_values.push_back(sups[k]);
  }
  const int n = static_cast<int>(lx.size());
  if (n < 4) {
    throw InsufficientDataError("rate fit: need at least 4 usable shells, have " +
                                std::to_string(n));
  }
  double mx = 0.0, my = 0.0;
  for (int k = 0; k < n; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  const double slope = sxy / sxx;
  fit.exponent = -slope;
  fit.intercept = my - slope * mx;
  double ss_res = 0.0;
  for (int k = 0; k < n; ++k) {
    const double e = ly[k] - (fit.intercept + slope * lx[k]);
    ss_res += e * e;
  }
  fit.stderr_slope = n > 2 ? std::sqrt(ss_res / ((n - 2) * sxx)) : 0.0;
  return fit;
}

namespace {

RateFit shell_sup_fit(const FieldSampler& field,
                      const std::function<double(double, double)>& quantity,
                      const std::vector<double>& shells, int n_angular) {
  std::vector<double> radii, sups;
  for (const double r : shells) {
    if (r < field.r_inner() || r > field.r_resolved()) continue;
    double sup = 0.0;
    for (int j = 0; j <= n_angular; ++j) {
      const double theta = field.theta_max() * j / n_angular;
      sup = std::max(sup, std::abs(quantity(r, theta)));
    }
    radii.push_back(r);
    sups.push_back(sup);
  }
  return fit_rate(radii, sups);
}

}  // namespace

RateFit decay_fit(const FieldSampler& field, DecayQuantity quantity,
                  const std::vector<double>& shells, int n_angular) {
  switch (quantity) {
    case DecayQuantity::SpeedError:
      return shell_sup_fit(
          field, [&](double r, double t) { return field.speed_error(r, t); },
          shells, n_angular);
    case DecayQuantity::PotentialError:
    default:
      return shell_sup_fit(
          field, [&](double r, double t) { return field.phi(r, t); }, shells,
          n_angular);
  }
}

RateFit decay_fit(const FieldSampler& field,
                  const std::function<double(double, double)>& quantity,
                  const std::vector<double>& shells, int n_angular) {
  return shell_sup_fit(field, quantity, shells, n_angular);
}

MultipoleCoefficients multipole_extract(const FieldSampler& field,
                                        int n_quad) {
  if (field.gas().is_compressible()) {
    throw ConfigurationError(
        "multipole_extract: only incompressible fields expand in harmonics");
  }
  if (field.domain_kind() != DomainKind::Exterior) {
    throw ConfigurationError("multipole_extract: needs an exterior field");
  }
  const int n = 3;
  const double a = field.r_inner();
  const double u_inf = field.axial_speed_infinity();

  // Boundary data on the sphere: Phi sampled, grad Phi . n recovered from the
  // radial velocity (u_r - u_inf cos theta), which for slip fields equals the
  // exact Neumann data -u_inf cos theta.
  const auto phi_b = [&](double theta) { return field.phi(a, theta); };
  const auto dphi_dn = [&](double theta) {
    const auto [u_r, u_t] = field.velocity(a, theta);
    (void)u_t;
    return u_r - u_inf * std::cos(theta);
  };

  // Axisymmetric reduction: the azimuthal integral is analytic, leaving
  // trapezoid quadrature in theta.  Components along x2, x3 and off-diagonal
  // couplings vanish identically.
  struct Reduced {
    double g = 0.0, g1 = 0.0, g11 = 0.0, g22 = 0.0;
  };
  const auto integrate = [&](int panels) {
    Reduced acc;
    for (int j = 0; j <= panels; ++j) {
      const double theta = kPi * j / panels;
      const double w = (j == 0 || j == panels) ? 0.5 : 1.0;
      const double s = std::sin(theta), c = std::cos(theta);
      const double ds = 2.0 * kPi * a * a * s * (kPi / panels) * w;
      const double pb = phi_b(theta);
      const double dn = dphi_dn(theta);
      acc.g += -dn * ds;
      acc.g1 += (a * c * dn - c * pb) * ds;
      acc.g11 += (-0.5 * a * a * c * c * dn + a * c * c * pb) * ds;
      // azimuthal means: <z2^2> = a^2 s^2/2, <z2 n2> = a s^2/2
      acc.g22 += (-0.25 * a * a * s * s * dn + 0.5 * a * s * s * pb) * ds;
    }
    return acc;
  };

  int panels = n_quad > 0 ? n_quad : 256;
  if (panels % 2 != 0) ++panels;
  const Reduced fine = integrate(panels);
  const Reduced coarse = integrate(panels / 2);

  MultipoleCoefficients out;
  out.dim = n;
  out.normalization = n * (n - 2.0) * unit_ball_volume(n);
  out.G = fine.g / out.normalization;
  out.G_i = Vec::Zero(n);
  out.G_i(0) = fine.g1 / out.normalization;
  out.G_ij = Mat::Zero(n, n);
  out.G_ij(0, 0) = fine.g11 / out.normalization;
  out.G_ij(1, 1) = fine.g22 / out.normalization;
  out.G_ij(2, 2) = fine.g22 / out.normalization;
  out.asymmetry = 0.0;  // axisymmetric reduction is symmetric by construction

  out.net_flux = -fine.g;
  const double flux_scale =
      std::max(1e-14, std::abs(u_inf) * a * a + std::abs(fine.g1));
  out.flux_violation = std::abs(out.net_flux) > 1e-6 * flux_scale;

  const double denom = std::max({std::abs(fine.g1), std::abs(fine.g11),
                                 std::abs(fine.g), 1e-300});
  out.richardson_rel_error =
      std::max({std::abs(fine.g1 - coarse.g1), std::abs(fine.g11 - coarse.g11),
                std::abs(fine.g - coarse.g)}) /
      denom;
  out.accuracy_warning = out.richardson_rel_error > 0.01;
  return out;
}

double multipole_eval(const MultipoleCoefficients& coeffs, const Vec& x) {
  const int n = coeffs.dim;
  const double r = x.norm();
  if (r == 0.0) throw SingularPointError("multipole_eval at the origin");
  QuadraticForm identity;
  identity.A = Mat::Identity(n, n);
  identity.center = Vec::Zero(n);
  identity.dim = n;
  const auto d = q_power_derivatives(x, n - 2.0, identity);
  double value = coeffs.G * std::pow(r, 2.0 - n);
  value += coeffs.G_i.dot(d.gradient);
  value += (coeffs.G_ij.array() * d.hessian.array()).sum();
  return value;
}

RateFit expansion_residual_fit(const FieldSampler& field,
                               const MultipoleCoefficients& coeffs,
                               const std::vector<double>& shells,
                               int n_angular, double noise_floor) {
  std::vector<double> radii, sups;
  double phi_scale = 0.0;
  for (const double r : shells) {
    if (r < field.r_inner() || r > field.r_resolved()) continue;
    double sup = 0.0;
    for (int j = 0; j <= n_angular; ++j) {
      const double theta = field.theta_max() * j / n_angular;
      Vec x(3);
      x << r * std::cos(theta), r * std::sin(theta), 0.0;
      const double resid = field.phi(r, theta) - multipole_eval(coeffs, x);
      sup = std::max(sup, std::abs(resid));
      phi_scale = std::max(phi_scale, std::abs(field.phi(r, theta)));
    }
    radii.push_back(r);
    sups.push_back(sup);
  }
  if (radii.size() < 4) {
    throw InsufficientDataError("expansion residual: fewer than 4 shells");
  }
  const double max_sup = *std::max_element(sups.begin(), sups.end());
  if (max_sup <= 1e-10 * std::max(phi_scale, 1e-30)) {
    RateFit fit;
    fit.exact = true;
    fit.radii = radii;
    fit.sup_values = sups;
    return fit;
  }
  RateFit fit = fit_rate(radii, sups);
  if (noise_floor > 0.0 && max_sup <= noise_floor) {
    fit.noise_floor = true;
    fit.noise_floor_value = noise_floor;
  }
  return fit;
}

}  // namespace farflow
