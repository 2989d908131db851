#include "farflow/gas.hpp"

#include <cmath>
#include <string>

namespace farflow {

namespace {

std::string num(double v) { return std::to_string(v); }

}  // namespace

GasModel GasModel::compressible(double gamma, double bernoulli_B,
                                double subsonic_margin) {
  if (gamma < 1.0) {
    throw ConfigurationError("gas: gamma must be >= 1, got " + num(gamma));
  }
  if (subsonic_margin < 0.0 || subsonic_margin >= 1.0) {
    throw ConfigurationError("gas: subsonic margin must lie in [0,1)");
  }
  GasModel m;
  m.mode_ = Mode::Compressible;
  m.gamma_ = gamma;
  m.bernoulli_ = bernoulli_B;
  m.margin_ = subsonic_margin;
  // Density at rest must be positive: h(rho) = B solvable with rho > 0.
  if (gamma > 1.0 && bernoulli_B <= 0.0) {
    throw ConfigurationError("gas: bernoulli_B must be positive for gamma > 1");
  }
  return m;
}

GasModel GasModel::incompressible(double rho_bar) {
  if (rho_bar <= 0.0) {
    throw ConfigurationError("gas: rho_bar must be positive");
  }
  GasModel m;
  m.mode_ = Mode::Incompressible;
  m.rho_bar_ = rho_bar;
  m.margin_ = 0.0;
  return m;
}

double GasModel::pressure(double rho) const {
  if (rho <= 0.0) throw std::domain_error("gas: pressure needs rho > 0");
  return std::pow(rho, gamma_) / gamma_;
}

double GasModel::pressure_prime(double rho) const {
  if (rho <= 0.0) throw std::domain_error("gas: p' needs rho > 0");
  return std::pow(rho, gamma_ - 1.0);
}

double GasModel::pressure_second(double rho) const {
  if (rho <= 0.0) throw std::domain_error("gas: p'' needs rho > 0");
  return (gamma_ - 1.0) * std::pow(rho, gamma_ - 2.0);
}

double GasModel::enthalpy(double rho) const {
  if (rho <= 0.0) throw std::domain_error("gas: enthalpy needs rho > 0");
  if (gamma_ == 1.0) return std::log(rho);
  return std::pow(rho, gamma_ - 1.0) / (gamma_ - 1.0);
}

void GasModel::require_subsonic(double q_squared) const {
  if (!is_compressible()) return;
  const double qcr = critical_speed();
  if (q_squared < 0.0) throw std::domain_error("gas: negative q^2");
  if (q_squared > (1.0 - margin_) * qcr * qcr) {
    throw NotSubsonicError("gas: q^2 = " + num(q_squared) +
                           " is not subsonic (q_cr^2 = " + num(qcr * qcr) +
                           ", margin = " + num(margin_) + ")");
  }
}

double GasModel::density_from_speed(double q_squared) const {
  if (!is_compressible()) return rho_bar_;
  require_subsonic(q_squared);
  if (gamma_ == 1.0) return std::exp(bernoulli_ - 0.5 * q_squared);
  return std::pow((gamma_ - 1.0) * (bernoulli_ - 0.5 * q_squared),
                  1.0 / (gamma_ - 1.0));
}

double GasModel::density_from_speed_bisect(double q_squared) const {
  if (!is_compressible()) return rho_bar_;
  require_subsonic(q_squared);
  const double target = bernoulli_ - 0.5 * q_squared;
  // h is strictly increasing, so the root is unique; expand the bracket first.
  double lo = 1.0, hi = 1.0;
  while (enthalpy(lo) > target) lo *= 0.5;
  while (enthalpy(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (enthalpy(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double GasModel::sound_speed(double rho) const {
  if (!is_compressible()) return infinite_speed();
  return std::sqrt(pressure_prime(rho));
}

double GasModel::critical_speed() const {
  if (!is_compressible()) return infinite_speed();
  if (gamma_ == 1.0) return 1.0;
  return std::sqrt(2.0 * bernoulli_ * (gamma_ - 1.0) / (gamma_ + 1.0));
}

double GasModel::rho_prime(double q_squared) const {
  if (!is_compressible()) return 0.0;
  require_subsonic(q_squared);
  const double rho = density_from_speed(q_squared);
  const double c2 = pressure_prime(rho);
  return -rho / (2.0 * c2);
}

double GasModel::rho_second(double q_squared) const {
  if (!is_compressible()) return 0.0;
  require_subsonic(q_squared);
  // rho'(s) = -rho^{2-gamma}/2, so rho''(s) = (2-gamma) rho^{3-2 gamma}/4.
  const double rho = density_from_speed(q_squared);
  return (2.0 - gamma_) * std::pow(rho, 3.0 - 2.0 * gamma_) / 4.0;
}

double GasModel::stagnation_density() const {
  if (!is_compressible()) return rho_bar_;
  return density_from_speed(0.0);
}

bool GasModel::pressure_condition_holds(double rho) const {
  if (!is_compressible()) return true;
  return pressure_prime(rho) > 0.0 &&
         2.0 * pressure_prime(rho) + rho * pressure_second(rho) > 0.0;
}

}  // namespace farflow
