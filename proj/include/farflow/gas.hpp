#ifndef FARFLOW_GAS_HPP
#define FARFLOW_GAS_HPP

#include <limits>

#include "farflow/errors.hpp"

namespace farflow {

// Homentropic gas with pressure law p(rho) = rho^gamma / gamma, or the
// incompressible limit with constant density.  Speeds are classified against
// the critical speed q_cr: the flow is subsonic iff |u| < q_cr.
//
// The Bernoulli constant B is an explicit parameter.  The textbook value
// q_cr = sqrt(2/(gamma+1)) corresponds to the normalization B = 1/(gamma-1).
class GasModel {
 public:
  enum class Mode { Compressible, Incompressible };

  static GasModel compressible(double gamma, double bernoulli_B,
                               double subsonic_margin = 0.0);
  static GasModel incompressible(double rho_bar);

  Mode mode() const { return mode_; }
  bool is_compressible() const { return mode_ == Mode::Compressible; }
  double gamma() const { return gamma_; }
  double bernoulli() const { return bernoulli_; }
  double rho_bar() const { return rho_bar_; }
  double subsonic_margin() const { return margin_; }

  // p(rho) = rho^gamma / gamma and its derivatives.
  double pressure(double rho) const;
  double pressure_prime(double rho) const;
  double pressure_second(double rho) const;

  // h with h'(rho) = p'(rho)/rho; h = rho^{gamma-1}/(gamma-1), or log(rho) at
  // gamma = 1 (integration constant 0).
  double enthalpy(double rho) const;

  // Inverse of the Bernoulli relation q^2/2 + h(rho) = B on the subsonic
  // branch.  Closed form for the power law; incompressible returns rho_bar.
  double density_from_speed(double q_squared) const;

  // h(rho) = B - q^2/2 solved by bisection; provided for pressure laws without
  // a closed-form inverse and cross-checked against the closed form in tests.
  double density_from_speed_bisect(double q_squared) const;

  double sound_speed(double rho) const;

  // q_cr = sqrt(2 B (gamma-1)/(gamma+1)); q_cr = 1 at gamma = 1 (sound speed
  // is identically 1 there).  Incompressible: +inf.
  double critical_speed() const;

  // d rho / d(q^2) = -rho / (2 c^2) on the subsonic branch; 0 incompressible.
  double rho_prime(double q_squared) const;
  // d^2 rho / d(q^2)^2, needed by the coefficient differential.
  double rho_second(double q_squared) const;

  // Stagnation density h^{-1}(B); equals density_from_speed(0).
  double stagnation_density() const;

  // 2 p'(rho) + rho p''(rho) > 0, the admissibility condition on the law.
  bool pressure_condition_holds(double rho) const;

  // Throws NotSubsonicError unless q^2 <= (1 - margin) q_cr^2.
  void require_subsonic(double q_squared) const;

  static constexpr double infinite_speed() {
    return std::numeric_limits<double>::infinity();
  }

 private:
  GasModel() = default;
  Mode mode_ = Mode::Compressible;
  double gamma_ = 1.4;
  double bernoulli_ = 0.0;
  double rho_bar_ = 1.0;
  double margin_ = 0.0;
};

}  // namespace farflow

#endif  // FARFLOW_GAS_HPP
